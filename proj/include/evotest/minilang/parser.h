// Copyright 2026 The Evotest Authors
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

#ifndef EVOTEST_MINILANG_PARSER_H_
#define EVOTEST_MINILANG_PARSER_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "evotest/minilang/ast.h"

namespace evotest::minilang {

// Raised for any lexical or syntactic violation. Parsing never yields a
// partial result.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, int line, int column,
             std::vector<std::string> expected, std::string detail);

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& detail() const { return detail_; }

  // "ERROR parse_error at <file>:<line>:<col> in <toplevel>" plus the detail.
  std::string Trace() const;

 private:
  std::string file_;
  int line_;
  int column_;
  std::vector<std::string> expected_;
  std::string detail_;
};

// Parses a program-under-test. `test` declarations are rejected.
Program ParseProgram(std::string_view source,
                     std::string source_path = "program.mini");

// Parses a test file: `test` methods and plain helper functions.
TestFile ParseTestFile(std::string_view source,
                       std::string path = "suite.test.mini");

}  // namespace evotest::minilang

#endif  // EVOTEST_MINILANG_PARSER_H_
