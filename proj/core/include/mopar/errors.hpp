/*
 * Copyright 2026 The mopar authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mopar {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ModelError : public Error {
 public:
  enum class Kind {
    RowNotStochastic,
    TargetNotSink,
    NoEnabledAction,
    DuplicateTarget,
    DuplicateAction,
    UnknownState,
    DuplicateState,
    BadWeight,
  };
  ModelError(Kind kind, std::string element, const std::string& what)
      : Error(what), kind_(kind), element_(std::move(element)) {}
  Kind kind() const { return kind_; }
  const std::string& element() const { return element_; }

 private:
  Kind kind_;
  std::string element_;
};

class SingularSystem : public Error {
 public:
  explicit SingularSystem(std::size_t row)
      : Error("singular system: row " + std::to_string(row) +
              " is a combination of earlier rows"),
        row_(row) {}
  std::size_t dependent_row() const { return row_; }

 private:
  std::size_t row_;
};

class StrategyError : public Error {
 public:
  StrategyError(std::string state, const std::string& what)
      : Error(what), state_(std::move(state)) {}
  const std::string& state() const { return state_; }

 private:
  std::string state_;
};

class MaterializationCapExceeded : public Error {
 public:
  using Error::Error;
};

class NotClean : public Error {
 public:
  enum class Kind { Parity, Targets };
  NotClean(Kind kind, std::vector<std::string> offenders);
  Kind kind() const { return kind_; }
  const std::vector<std::string>& offenders() const { return offenders_; }

 private:
  Kind kind_;
  std::vector<std::string> offenders_;
};

class ThresholdNotStrictlyExceeded : public Error {
 public:
  explicit ThresholdNotStrictlyExceeded(std::size_t target)
      : Error("reach probability does not strictly exceed threshold " +
              std::to_string(target)),
        target_(target) {}
  std::size_t target() const { return target_; }

 private:
  std::size_t target_;
};

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  enum class Kind { PointOutside, PointStrictlyInside, NotAVertex, NotRelativelyInterior };
  GeometryError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, std::string expected);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string expected_;
};

class QueryError : public Error {
 public:
  enum class Kind { QuerySyntax, MixedStrictness, UnknownTarget };
  QueryError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Raised when an internally produced witness fails its own exact re-check.
class CertificateFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace mopar
