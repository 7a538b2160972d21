// Copyright 2026 The catchsim Authors
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

#ifndef CATCHSIM__ERRORS_HPP_
#define CATCHSIM__ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace catchsim
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Integrator blow-up or a non-finite quantity in the plant state.
class NonFiniteState : public Error
{
public:
  using Error::Error;
};

class ParseError : public Error
{
public:
  ParseError(std::size_t line, const std::string & message)
  : Error("line " + std::to_string(line) + ": " + message), line_(line)
  {
  }
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

class ValidationError : public Error
{
public:
  ValidationError(std::string field, const std::string & constraint)
  : Error(field + ": " + constraint), field_(std::move(field))
  {
  }
  const std::string & field() const { return field_; }

private:
  std::string field_;
};

class IoError : public Error
{
public:
  using Error::Error;
};

// A metric was requested for an operating mode that never ran.
class ModeAbsent : public Error
{
public:
  using Error::Error;
};

class EmptyPointList : public Error
{
public:
  EmptyPointList() : Error("ground check needs at least one monitored point") {}
};

class UnknownJoint : public Error
{
public:
  explicit UnknownJoint(const std::string & name) : Error("no limit configured for joint '" + name + "'") {}
};

}  // namespace catchsim

#endif  // CATCHSIM__ERRORS_HPP_
