//==============================================================================
// Copyright 2026 The rangemos Authors
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
//==============================================================================

#pragma once

#include <stdexcept>
#include <string>

namespace rangemos
{

//! Base of every error raised by the library.
class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

//! A file could not be opened, read or written.
class IoError : public Error
{
public:
  using Error::Error;
};

//! A file was readable but its content violates the expected format.
class FormatError : public Error
{
public:
  using Error::Error;
};

//! A caller broke an operation precondition (mismatched shapes, bad config).
class ContractError : public Error
{
public:
  using Error::Error;
};

} // namespace rangemos
