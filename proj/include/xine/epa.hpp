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

// The M-mode arbitrator: owns the single hart, installs the PMP programming
// of whichever enclave runs, saves and flushes architectural state on every
// switch, and dispatches traps.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "xine/boot.hpp"
#include "xine/dma.hpp"
#include "xine/enclaves.hpp"
#include "xine/se.hpp"
#include "xine/trace.hpp"

namespace xine {

enum class SwitchReason { ServiceRequest, ExplicitTransfer, Interrupt, Yield, Exit, Kill };

std::string_view to_string(SwitchReason reason);

/// Everything the EPA arbitrates over.
struct System {
  PlatformLayout layout;
  Memory memory;
  SecurityCsr csr;
  AvailabilityTable table;
  SecureElement se;
};

struct ScheduledInterrupt {
  /// Fires before the step with this global index.
  std::uint64_t at_step = 0;
  std::uint32_t line = 0;
};

struct EpaOptions {
  std::uint64_t step_budget = 1'000'000;
  std::vector<ScheduledInterrupt> interrupts;
};

struct RunResult {
  enum class Status { Idle, StepBudgetExceeded };
  Status status = Status::Idle;
  std::uint64_t steps = 0;
};

/// Snapshot handed to the step observer just before a micro-op executes.
struct StepInfo {
  std::uint64_t step = 0;
  EnclaveId running;
  const Context& hart;
  const PmpUnit& pmp;
  std::optional<EnclaveId> service_ctx;
};

class Epa {
 public:
  using StepObserver = std::function<void(const StepInfo&)>;
  using DeviceWriteHook = std::function<void(PhysAddr, std::uint32_t)>;
  using InterruptHandler = std::function<void(std::uint32_t line)>;

  Epa(System& system, EventTrace& trace, EpaOptions options = {});

  /// Records the boot outcome; run_until_idle refuses to start unless booted.
  void attest_boot(const BootReport& report) { booted_ = report.booted(); }
  bool booted() const { return booted_; }

  /// Installs the target's PMP programming and restores its saved context, or
  /// a fresh one if it has none. Throws AlreadyRunning, UnknownEnclave, and
  /// Precondition for a faulted target or a service context on a non-Crypto
  /// target.
  void wakeup(EnclaveId target, std::optional<EnclaveId> service_ctx = std::nullopt);

  /// Saves (unless exiting or killed) and flushes the running enclave's
  /// context, turns the PMP off. Exit and Kill leave it Sleeping; Kill also
  /// marks it faulted and scrubs its region. Throws NothingRunning.
  void suspend(SwitchReason reason);

  /// Dispatches a trap raised by the running enclave. Throws NothingRunning.
  void handle_trap(const TrapCause& cause);

  /// Wakes `start` and steps until nothing is Running or Suspended, or the
  /// budget runs out. Throws BootNotCompleted before a good boot.
  RunResult run_until_idle(EnclaveId start);

  std::optional<EnclaveId> running() const { return running_; }
  std::optional<EnclaveId> service_ctx() const { return service_ctx_; }
  LifecycleState state(EnclaveId id) const { return system_.layout.at(id).state; }
  bool faulted(EnclaveId id) const { return faulted_.contains(id); }
  const PmpUnit& pmp() const { return pmp_; }
  /// Live architectural state of the hart.
  const Context& hart() const { return hart_; }
  Context& hart() { return hart_; }
  std::optional<Context> saved_context(EnclaveId id) const;
  std::uint64_t steps() const { return steps_; }
  System& system() { return system_; }

  void set_step_observer(StepObserver f) { step_observer_ = std::move(f); }
  /// Called after every successful U-mode write; device models live here.
  void set_device_write_hook(DeviceWriteHook f) { device_hook_ = std::move(f); }
  /// M-mode interrupt stub. It may log; it never touches enclave memory.
  void set_interrupt_handler(InterruptHandler f) { irq_handler_ = std::move(f); }

 private:
  const std::string& name_of(EnclaveId id) const { return system_.layout.at(id).name; }
  EnclaveId require_running() const;
  void kill_running(const std::string& cause, nlohmann::json detail);
  void serve_crypto(EnclaveId requester, const trap::ServiceRequest& req);
  void on_exit(EnclaveId id);
  void set_status(std::uint32_t value) { hart_.regs[kStatusRegister] = value; }
  std::optional<EnclaveId> next_suspended() const;
  bool valid_transfer_target(EnclaveId from, EnclaveId to) const;

  System& system_;
  EventTrace& trace_;
  EpaOptions options_;
  bool booted_ = false;

  Context hart_;
  PmpUnit pmp_;
  std::optional<EnclaveId> running_;
  std::optional<EnclaveId> service_ctx_;
  std::optional<EnclaveId> last_run_;
  std::map<EnclaveId, Context> saved_;
  std::set<EnclaveId> faulted_;
  std::uint64_t steps_ = 0;

  StepObserver step_observer_;
  DeviceWriteHook device_hook_;
  InterruptHandler irq_handler_;
};

}  // namespace xine
