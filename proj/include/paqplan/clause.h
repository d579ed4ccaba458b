// Copyright 2026 The paqplan Authors.
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

#ifndef PAQPLAN_CLAUSE_H_
#define PAQPLAN_CLAUSE_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "paqplan/data.h"

namespace paq {

// PREDICT(target [, predictor ...]) GIVEN relation
struct PaqQuery {
  std::string target;
  std::vector<std::string> predictors;  // empty: every other attribute
  std::string relation;

  bool operator==(const PaqQuery&) const = default;
};

// Finds the predictive clause inside `text`; text around it is skipped.
// Keywords are case-insensitive. Errors carry the character offset.
PaqQuery parse_predict_clause(std::string_view text);

// Canonical form: "PREDICT(a, b) GIVEN R".
std::string print(const PaqQuery& query);

// Relation name -> table with a header row.
using Catalog = std::map<std::string, Table>;

// Reads every *.csv file in `dir`; the relation name is the file stem.
Catalog load_catalog(const std::string& dir);

struct Binding {
  std::string relation;
  std::size_t target = 0;
  std::vector<std::size_t> predictors;
  Dataset data;  // predictor columns, target mapped to {0, 1}
};

// Attributes match a column by exact name, or by the part after the last
// '.' when no column has the qualified name.
Binding bind(const PaqQuery& query, const Catalog& catalog);

}  // namespace paq

#endif  // PAQPLAN_CLAUSE_H_
