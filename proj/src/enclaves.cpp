// Copyright 2026 The XINE Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xine/enclaves.hpp"

#include <algorithm>

namespace xine {

std::string_view to_string(LifecycleState state) {
  switch (state) {
    case LifecycleState::Sleeping: return "Sleeping";
    case LifecycleState::Running: return "Running";
    case LifecycleState::Suspended: return "Suspended";
  }
  return "?";
}

const EnclaveDescriptor& PlatformLayout::at(EnclaveId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::UnknownEnclave, "no enclave with id " + std::to_string(id.value));
  }
  return enclaves[id.value];
}

EnclaveDescriptor& PlatformLayout::at(EnclaveId id) {
  return const_cast<EnclaveDescriptor&>(std::as_const(*this).at(id));
}

std::optional<EnclaveId> PlatformLayout::find(std::string_view name) const {
  for (const auto& e : enclaves) {
    if (e.name == name) return e.id;
  }
  return std::nullopt;
}

namespace {

std::optional<EnclaveId> only_of_kind(const PlatformLayout& layout, EnclaveKind kind) {
  std::optional<EnclaveId> found;
  for (const auto& e : layout.enclaves) {
    if (e.kind != kind) continue;
    if (found) return std::nullopt;
    found = e.id;
  }
  return found;
}

}  // namespace

std::optional<EnclaveId> PlatformLayout::crypto_enclave() const {
  return only_of_kind(*this, EnclaveKind::Crypto);
}

std::optional<EnclaveId> PlatformLayout::runtime_enclave() const {
  return only_of_kind(*this, EnclaveKind::Runtime);
}

std::optional<EnclaveId> PlatformLayout::owner_of(std::uint64_t addr) const {
  for (const auto& e : enclaves) {
    if (e.region.contains(addr)) return e.id;
  }
  return std::nullopt;
}

PmpUnit pmp_program_for(const PlatformLayout& layout, EnclaveId enclave,
                        std::optional<EnclaveId> service_ctx) {
  const auto& self = layout.at(enclave);
  if (service_ctx) {
    if (self.kind != EnclaveKind::Crypto) {
      throw Error(ErrorCode::InvalidServiceContext,
                  "only the Crypto enclave runs with a service context");
    }
    if (!layout.contains(*service_ctx) ||
        layout.at(*service_ctx).kind != EnclaveKind::App) {
      throw Error(ErrorCode::InvalidServiceContext,
                  "service context must name an App enclave");
    }
  }

  PmpUnit unit;
  unit.entries[kSlotOwnRegion] = napot_entry(self.region, true, true, true);

  switch (self.kind) {
    case EnclaveKind::App: {
      if (auto re = layout.runtime_enclave()) {
        unit.entries[kSlotRuntimeExec] = napot_entry(layout.at(*re).region, false, false, true);
      }
      if (layout.dma.size > 0) {
        unit.entries[kSlotDma] = napot_entry(layout.dma, true, true, false);
      }
      std::size_t slot = kSlotFirstDevice;
      for (const auto& dev : layout.devices) {
        if (dev.owner != enclave) continue;
        if (slot >= kPmpEntryCount) {
          throw Error(ErrorCode::Precondition, "too many device windows for " + self.name);
        }
        unit.entries[slot++] = napot_entry(dev.range, true, true, false);
      }
      break;
    }
    case EnclaveKind::Crypto:
      if (service_ctx) {
        unit.entries[kSlotRequester] =
            napot_entry(layout.at(*service_ctx).region, true, true, false);
      }
      if (layout.mailbox.size > 0) {
        unit.entries[kSlotMailbox] = napot_entry(layout.mailbox, true, true, false);
      }
      break;
    case EnclaveKind::Runtime:
      break;
  }
  return unit;
}

std::string LayoutError::code() const {
  switch (kind) {
    case Kind::Overlap: return "Overlap";
    case Kind::Unmapped: return "Unmapped";
    case Kind::KindCount: return "KindCount";
    case Kind::EntryBudgetExceeded: return "EntryBudgetExceeded";
    case Kind::NotNapot: return "NotNapot";
    case Kind::EntryOutsideRegion: return "EntryOutsideRegion";
    case Kind::ReceiveBufferOutside: return "ReceiveBufferOutside";
    case Kind::NonDenseIds: return "NonDenseIds";
    case Kind::MmioMissing: return "MmioMissing";
  }
  return "?";
}

std::string LayoutError::message(const PlatformLayout& layout) const {
  auto name = [&](std::optional<EnclaveId> id) -> std::string {
    if (!id) return "?";
    if (layout.contains(*id)) return layout.enclaves[id->value].name;
    return "#" + std::to_string(id->value);
  };
  switch (kind) {
    case Kind::Overlap:
      return "regions of " + name(first) + " and " + name(second) + " overlap";
    case Kind::Unmapped:
      return "region of " + name(first) + " is not inside one ram/flash region";
    case Kind::KindCount:
      return "need exactly one Crypto and one Runtime enclave";
    case Kind::EntryBudgetExceeded:
      return first ? "device windows of " + name(first) + " exceed the PMP slots"
                   : "layout needs " + std::to_string(required_pmp_entries(layout)) +
                         " PMP entries, only 16 exist";
    case Kind::NotNapot:
      return first ? "region of " + name(first) + " is not NAPOT-encodable"
                   : "an MMIO window is not NAPOT-encodable";
    case Kind::EntryOutsideRegion:
      return "entry point of " + name(first) + " is outside its region";
    case Kind::ReceiveBufferOutside:
      return "receive buffer of " + name(first) + " is outside its region";
    case Kind::NonDenseIds:
      return "enclave ids must be 0..N-1 in order (at " + name(first) + ")";
    case Kind::MmioMissing:
      return "mailbox and DMA windows must be mapped as mailbox-mmio / dma-mmio";
  }
  return "?";
}

std::size_t required_pmp_entries(const PlatformLayout& layout) {
  return layout.enclaves.size() + 2;
}

std::vector<LayoutError> validate_layout(const PlatformLayout& layout,
                                         const Memory& memory) {
  using K = LayoutError::Kind;
  std::vector<LayoutError> errors;
  const auto& es = layout.enclaves;

  for (std::size_t i = 0; i < es.size(); ++i) {
    if (es[i].id.value != i) errors.push_back({K::NonDenseIds, es[i].id, {}});
  }

  auto count = [&](EnclaveKind k) {
    return std::count_if(es.begin(), es.end(), [k](const auto& e) { return e.kind == k; });
  };
  if (count(EnclaveKind::Crypto) != 1 || count(EnclaveKind::Runtime) != 1) {
    errors.push_back({K::KindCount, {}, {}});
  }

  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i + 1; j < es.size(); ++j) {
      if (es[i].region.overlaps(es[j].region)) {
        errors.push_back({K::Overlap, es[i].id, es[j].id});
      }
    }
  }

  for (const auto& e : es) {
    const auto* backing = memory.find(e.region.base, e.region.size);
    if (e.region.size == 0 || backing == nullptr ||
        (backing->kind != RegionKind::Ram && backing->kind != RegionKind::Flash)) {
      errors.push_back({K::Unmapped, e.id, {}});
    }
    if (!is_napot_encodable(e.region.base, e.region.size)) {
      errors.push_back({K::NotNapot, e.id, {}});
    }
    if (!e.region.contains(e.entry_point.value, 4)) {
      errors.push_back({K::EntryOutsideRegion, e.id, {}});
    }
    if (e.receive_buffer &&
        (e.receive_buffer->size == 0 ||
         !e.region.contains(e.receive_buffer->base, e.receive_buffer->size))) {
      errors.push_back({K::ReceiveBufferOutside, e.id, {}});
    }
  }

  auto mapped_as = [&](const AddrRange& r, RegionKind kind) {
    const auto* m = memory.find(r.base, r.size);
    return r.size > 0 && m != nullptr && m->kind == kind;
  };
  if (!mapped_as(layout.mailbox, RegionKind::MailboxMmio) ||
      !mapped_as(layout.dma, RegionKind::DmaMmio)) {
    errors.push_back({K::MmioMissing, {}, {}});
  }
  bool mmio_napot = is_napot_encodable(layout.mailbox.base, layout.mailbox.size) &&
                    is_napot_encodable(layout.dma.base, layout.dma.size);
  for (const auto& d : layout.devices) {
    mmio_napot = mmio_napot && is_napot_encodable(d.range.base, d.range.size);
  }
  if (!mmio_napot) errors.push_back({K::NotNapot, {}, {}});

  if (required_pmp_entries(layout) > kPmpEntryCount) {
    errors.push_back({K::EntryBudgetExceeded, {}, {}});
  }
  for (const auto& e : es) {
    auto owned = std::count_if(layout.devices.begin(), layout.devices.end(),
                               [&](const auto& d) { return d.owner == e.id; });
    if (owned > 0 && kSlotFirstDevice + static_cast<std::size_t>(owned) > kPmpEntryCount) {
      errors.push_back({K::EntryBudgetExceeded, e.id, {}});
    }
  }
  return errors;
}

}  // namespace xine
