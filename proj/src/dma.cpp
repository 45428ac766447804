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

#include "xine/dma.hpp"

namespace xine {

std::string_view to_string(DmaVerdict verdict) {
  switch (verdict) {
    case DmaVerdict::Granted: return "Granted";
    case DmaVerdict::PolicyDenied: return "PolicyDenied";
    case DmaVerdict::PullForbidden: return "PullForbidden";
    case DmaVerdict::InsufficientSpace: return "InsufficientSpace";
    case DmaVerdict::SourceOutOfRegion: return "SourceOutOfRegion";
  }
  return "?";
}

bool SecurityCsr::set(PrivilegeMode mode, EnclaveId src, EnclaveId dst, bool allowed) {
  if (mode != PrivilegeMode::Machine) return false;
  if (src == dst) {
    throw Error(ErrorCode::Precondition, "DMA policy edge from an enclave to itself");
  }
  if (allowed) {
    edges_.insert({src.value, dst.value});
  } else {
    edges_.erase({src.value, dst.value});
  }
  return true;
}

std::optional<AvailabilityRow> AvailabilityTable::row(EnclaveId id) const {
  auto it = rows_.find(id);
  if (it == rows_.end()) return std::nullopt;
  return it->second;
}

void AvailabilityTable::on_enclave_exit(const EnclaveDescriptor& enclave,
                                        const AddrRange& declared_free) {
  if (!enclave.region.contains(declared_free.base, declared_free.size)) {
    throw Error(ErrorCode::SpanOutsideRegion,
                "declared free span is outside " + enclave.name + "'s region");
  }
  rows_[enclave.id] = {PhysAddr(static_cast<std::uint32_t>(declared_free.base)),
                       static_cast<std::uint32_t>(declared_free.size)};
}

void AvailabilityTable::consume(EnclaveId id, std::uint32_t len) {
  auto it = rows_.find(id);
  if (it == rows_.end() || it->second.free_len < len) {
    throw Error(ErrorCode::Precondition, "availability row cannot absorb the transfer");
  }
  it->second.free_base = PhysAddr(it->second.free_base.value + len);
  it->second.free_len -= len;
}

DmaVerdict adjudicate_and_transfer(const DmaRequest& req, const SecurityCsr& csr,
                                   AvailabilityTable& table, Memory& mem,
                                   const PlatformLayout& layout) {
  if (!layout.contains(req.src) || !layout.contains(req.dst) || req.src == req.dst ||
      !csr.allowed(req.src, req.dst)) {
    return DmaVerdict::PolicyDenied;
  }
  const auto& src = layout.at(req.src);
  const auto& dst = layout.at(req.dst);
  if (src.kind != EnclaveKind::App || dst.kind != EnclaveKind::App) {
    return DmaVerdict::PolicyDenied;
  }

  for (const auto& other : layout.enclaves) {
    if (other.id != req.src && other.region.overlaps(req.src_addr.value, req.len)) {
      return DmaVerdict::PullForbidden;
    }
  }

  if (req.len == 0 || !src.region.contains(req.src_addr.value, req.len)) {
    return DmaVerdict::SourceOutOfRegion;
  }

  auto row = table.row(req.dst);
  if (!row || row->free_len < req.len) return DmaVerdict::InsufficientSpace;

  auto data = mem.read_raw(req.src_addr, req.len);
  if (!data || !mem.is_mapped(row->free_base.value, req.len)) {
    // Validated layouts map every enclave region, so this is a broken setup.
    throw Error(ErrorCode::Precondition, "DMA span is not backed by memory");
  }
  mem.write_raw(row->free_base, *data);
  table.consume(req.dst, req.len);
  return DmaVerdict::Granted;
}

}  // namespace xine
