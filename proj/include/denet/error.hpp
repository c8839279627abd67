// Copyright 2026 The denet-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

#include <sys/types.h>

namespace denet {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The pid's kernel entry vanished; the process exited.
class ProcessGone : public Error {
 public:
  explicit ProcessGone(pid_t pid)
      : Error("process " + std::to_string(pid) + " is gone"), pid_(pid) {}
  pid_t pid() const noexcept { return pid_; }

 private:
  pid_t pid_;
};

class PermissionDenied : public Error {
 public:
  using Error::Error;
};

// A kernel file did not have the layout we rely on.
class ParseError : public Error {
 public:
  using Error::Error;
};

class InvalidWindow : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class SpawnFailed : public Error {
 public:
  SpawnFailed(const std::string& what, int err) : Error(what), errno_(err) {}
  int error_number() const noexcept { return errno_; }

 private:
  int errno_;
};

class NoSuchProcess : public Error {
 public:
  using Error::Error;
};

// Raised by Monitor::sample_once when the root process is no longer there.
// Ends the sampling loop; it is not a failure.
class TargetExited : public Error {
 public:
  using Error::Error;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

// Bad command line. what() is the reason, usage() the synopsis.
class UsageError : public Error {
 public:
  UsageError(const std::string& what, std::string usage)
      : Error(what), usage_(std::move(usage)) {}
  const std::string& usage() const noexcept { return usage_; }

 private:
  std::string usage_;
};

}  // namespace denet
