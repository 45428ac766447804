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

#include "xine/epa.hpp"

#include <algorithm>

namespace xine {

std::string_view to_string(SwitchReason reason) {
  switch (reason) {
    case SwitchReason::ServiceRequest: return "ServiceRequest";
    case SwitchReason::ExplicitTransfer: return "ExplicitTransfer";
    case SwitchReason::Interrupt: return "Interrupt";
    case SwitchReason::Yield: return "Yield";
    case SwitchReason::Exit: return "Exit";
    case SwitchReason::Kill: return "Kill";
  }
  return "?";
}

Epa::Epa(System& system, EventTrace& trace, EpaOptions options)
    : system_(system), trace_(trace), options_(std::move(options)) {
  std::stable_sort(options_.interrupts.begin(), options_.interrupts.end(),
                   [](const auto& a, const auto& b) { return a.at_step < b.at_step; });
}

std::optional<Context> Epa::saved_context(EnclaveId id) const {
  auto it = saved_.find(id);
  if (it == saved_.end()) return std::nullopt;
  return it->second;
}

EnclaveId Epa::require_running() const {
  if (!running_) throw Error(ErrorCode::NothingRunning, "no enclave is running");
  return *running_;
}

void Epa::wakeup(EnclaveId target, std::optional<EnclaveId> service_ctx) {
  if (running_) {
    throw Error(ErrorCode::AlreadyRunning, name_of(*running_) + " is already running");
  }
  if (!system_.layout.contains(target)) {
    throw Error(ErrorCode::UnknownEnclave, "no enclave with id " + std::to_string(target.value));
  }
  if (faulted(target)) {
    throw Error(ErrorCode::Precondition, name_of(target) + " was killed");
  }
  auto& desc = system_.layout.at(target);
  pmp_ = pmp_program_for(system_.layout, target, service_ctx);

  bool resumed = false;
  if (auto it = saved_.find(target);
      desc.state == LifecycleState::Suspended && it != saved_.end()) {
    hart_ = it->second;
    saved_.erase(it);
    resumed = true;
  } else {
    hart_ = Context::fresh(desc.entry_point);
  }
  desc.state = LifecycleState::Running;
  running_ = target;
  service_ctx_ = service_ctx;
  last_run_ = target;

  nlohmann::json attrs = {{"resumed", resumed}};
  if (service_ctx) attrs["service_ctx"] = name_of(*service_ctx);
  trace_.emit(EventKind::Wakeup, desc.name, std::move(attrs));
}

void Epa::suspend(SwitchReason reason) {
  auto id = require_running();
  auto& desc = system_.layout.at(id);
  bool leaving = reason == SwitchReason::Exit || reason == SwitchReason::Kill;
  if (leaving) {
    saved_.erase(id);
  } else {
    saved_[id] = hart_;
  }

  hart_ = Context{};
  pmp_ = PmpUnit{};
  running_.reset();
  service_ctx_.reset();
  desc.state = leaving ? LifecycleState::Sleeping : LifecycleState::Suspended;

  if (reason == SwitchReason::Kill) {
    faulted_.insert(id);
    system_.memory.fill_raw(desc.region, 0);
    trace_.emit(EventKind::Kill, desc.name, {{"scrubbed", true}});
  } else if (reason == SwitchReason::Exit) {
    trace_.emit(EventKind::Exit, desc.name);
  } else {
    trace_.emit(EventKind::Suspend, desc.name, {{"reason", to_string(reason)}});
  }
}

void Epa::kill_running(const std::string& cause, nlohmann::json detail) {
  auto id = require_running();
  detail["cause"] = cause;
  trace_.emit(EventKind::Trap, name_of(id), std::move(detail));
  suspend(SwitchReason::Kill);
}

bool Epa::valid_transfer_target(EnclaveId from, EnclaveId to) const {
  if (!system_.layout.contains(to) || to == from || faulted(to)) return false;
  const auto& desc = system_.layout.at(to);
  return desc.kind == EnclaveKind::App && desc.state != LifecycleState::Running;
}

void Epa::handle_trap(const TrapCause& cause) {
  auto id = require_running();
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, trap::AccessFault>) {
          kill_running("AccessFault", {{"addr", c.fault.addr.value},
                                       {"access", to_string(c.fault.kind)},
                                       {"reason", to_string(c.fault.reason)},
                                       {"deny", to_string(c.fault.deny)}});
        } else if constexpr (std::is_same_v<T, trap::ServiceRequest>) {
          serve_crypto(id, c);
        } else if constexpr (std::is_same_v<T, trap::Transfer>) {
          if (!valid_transfer_target(id, c.target)) {
            kill_running("InvalidTransfer", {{"target", c.target.value}});
            return;
          }
          suspend(SwitchReason::ExplicitTransfer);
          wakeup(c.target);
        } else if constexpr (std::is_same_v<T, trap::Exit>) {
          suspend(SwitchReason::Exit);
          on_exit(id);
        } else if constexpr (std::is_same_v<T, trap::DmaSubmitted>) {
          DmaRequest req{id, c.dst, c.src_addr, c.len};
          auto verdict = adjudicate_and_transfer(req, system_.csr, system_.table,
                                                 system_.memory, system_.layout);
          nlohmann::json attrs = {{"src", name_of(id)},
                                  {"dst_id", c.dst.value},
                                  {"len", c.len},
                                  {"verdict", to_string(verdict)}};
          if (system_.layout.contains(c.dst)) attrs["dst"] = name_of(c.dst);
          trace_.emit(EventKind::DmaVerdict, "dma", std::move(attrs));
          system_.memory.fill_raw(system_.layout.dma, 0);
          set_status(static_cast<std::uint32_t>(verdict));
        } else if constexpr (std::is_same_v<T, trap::ExternalInterrupt>) {
          trace_.emit(EventKind::Trap, name_of(id),
                      {{"cause", "ExternalInterrupt"}, {"line", c.line}});
          suspend(SwitchReason::Interrupt);
          if (irq_handler_) irq_handler_(c.line);
          wakeup(id);
        } else if constexpr (std::is_same_v<T, trap::Yield>) {
          if (next_suspended()) suspend(SwitchReason::Yield);
        }
      },
      cause);
}

void Epa::serve_crypto(EnclaveId requester, const trap::ServiceRequest& req) {
  auto ce = system_.layout.crypto_enclave();
  if (system_.layout.at(requester).kind != EnclaveKind::App || !ce || faulted(*ce)) {
    kill_running("InvalidServiceRequest", nlohmann::json::object());
    return;
  }
  suspend(SwitchReason::ServiceRequest);
  wakeup(*ce, requester);

  CeServiceEnv env{system_.memory,
                   pmp_,
                   Caller{*ce, EnclaveKind::Crypto},
                   name_of(*ce),
                   system_.layout.at(requester).region,
                   system_.se,
                   &trace_};
  ServiceRequestArgs args{requester, req.op, req.msg_addr, req.msg_len, req.result_addr};
  auto status = ce_service(args, env);

  suspend(SwitchReason::Exit);
  wakeup(requester);
  set_status(static_cast<std::uint32_t>(status));
}

void Epa::on_exit(EnclaveId id) {
  const auto& desc = system_.layout.at(id);
  if (!desc.receive_buffer) return;
  system_.table.on_enclave_exit(desc, *desc.receive_buffer);
  trace_.emit(EventKind::AvailabilityUpdate, "epa",
              {{"enclave", desc.name},
               {"free_base", desc.receive_buffer->base},
               {"free_len", desc.receive_buffer->size}});
}

std::optional<EnclaveId> Epa::next_suspended() const {
  const auto n = static_cast<std::uint32_t>(system_.layout.enclaves.size());
  std::uint32_t start = last_run_ ? last_run_->value + 1 : 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    EnclaveId id((start + i) % n);
    if (running_ && id == *running_) continue;
    if (system_.layout.at(id).state == LifecycleState::Suspended) return id;
  }
  return std::nullopt;
}

RunResult Epa::run_until_idle(EnclaveId start) {
  if (!booted_) throw Error(ErrorCode::BootNotCompleted, "boot has not completed");
  if (!system_.layout.contains(start) ||
      system_.layout.at(start).kind != EnclaveKind::App) {
    throw Error(ErrorCode::UnknownEnclave, "start enclave must be an App enclave");
  }
  wakeup(start);
  std::size_t next_irq = 0;
  while (true) {
    if (!running_) {
      auto next = next_suspended();
      if (!next) return {RunResult::Status::Idle, steps_};
      wakeup(*next);
      continue;
    }
    if (steps_ >= options_.step_budget) {
      return {RunResult::Status::StepBudgetExceeded, steps_};
    }
    while (next_irq < options_.interrupts.size() &&
           options_.interrupts[next_irq].at_step < steps_) {
      ++next_irq;
    }
    if (next_irq < options_.interrupts.size() &&
        options_.interrupts[next_irq].at_step == steps_) {
      handle_trap(trap::ExternalInterrupt{options_.interrupts[next_irq++].line});
      continue;
    }

    auto id = *running_;
    const auto& program = system_.layout.at(id).program;
    if (step_observer_) step_observer_(StepInfo{steps_, id, hart_, pmp_, service_ctx_});

    StepEnv env{system_.memory, pmp_, PrivilegeMode::User, system_.layout.dma,
                device_hook_, {}};
    auto outcome = step(program, hart_, env);
    ++steps_;
    if (auto* trapped = std::get_if<step_result::Trapped>(&outcome)) {
      handle_trap(trapped->cause);
    }
  }
}

}  // namespace xine
