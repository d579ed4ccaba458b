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

#include "paqplan/clause.h"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <optional>
#include <set>

#include "paqplan/error.h"

namespace paq {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::size_t pos() const { return pos_; }
  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool keyword_at(std::size_t at, std::string_view word) const {
    if (at + word.size() > text_.size()) return false;
    if (at > 0 && ident_char(text_[at - 1])) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[at + i])) != word[i]) return false;
    }
    const std::size_t after = at + word.size();
    return after == text_.size() || !ident_char(text_[after]);
  }

  // Moves past the next occurrence of `word` outside quoted literals.
  bool seek_keyword(std::string_view word) {
    while (!at_end()) {
      const char c = text_[pos_];
      if (c == '\'' || c == '"') {
        const std::size_t close = text_.find(c, pos_ + 1);
        if (close == std::string_view::npos) {
          throw Error(ErrorCode::kSyntax, "unterminated string literal", pos_);
        }
        pos_ = close + 1;
        continue;
      }
      if (keyword_at(pos_, word)) {
        pos_ += word.size();
        return true;
      }
      ++pos_;
    }
    return false;
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c, std::string_view what) {
    if (!accept(c)) throw Error(ErrorCode::kSyntax, "expected " + std::string(what), pos_);
  }

  // ident ('.' ident)*
  std::string attribute(std::string_view what) {
    skip_space();
    const std::size_t start = pos_;
    while (true) {
      if (at_end() || !ident_start(text_[pos_])) {
        throw Error(ErrorCode::kSyntax, "expected " + std::string(what), pos_);
      }
      while (!at_end() && ident_char(text_[pos_])) ++pos_;
      if (at_end() || text_[pos_] != '.') break;
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

std::optional<std::size_t> find_column(const Table& table, const std::string& name) {
  auto exact = std::find(table.columns.begin(), table.columns.end(), name);
  if (exact != table.columns.end()) {
    return static_cast<std::size_t>(exact - table.columns.begin());
  }
  const std::size_t dot = name.rfind('.');
  if (dot == std::string::npos) return std::nullopt;
  const std::string bare = name.substr(dot + 1);
  auto it = std::find(table.columns.begin(), table.columns.end(), bare);
  if (it == table.columns.end()) return std::nullopt;
  return static_cast<std::size_t>(it - table.columns.begin());
}

}  // namespace

PaqQuery parse_predict_clause(std::string_view text) {
  Scanner s(text);
  if (!s.seek_keyword("PREDICT")) {
    throw Error(ErrorCode::kSyntax, "no PREDICT clause", s.pos());
  }
  s.expect('(', "'(' after PREDICT");
  s.skip_space();
  if (s.accept(')')) throw Error(ErrorCode::kSyntax, "empty PREDICT argument list", s.pos() - 1);

  PaqQuery q;
  q.target = s.attribute("target attribute");
  while (s.accept(',')) {
    const std::size_t at = (s.skip_space(), s.pos());
    std::string p = s.attribute("predictor attribute");
    if (p == q.target) {
      throw Error(ErrorCode::kSemantic, "target '" + p + "' is also listed as a predictor", at);
    }
    if (std::find(q.predictors.begin(), q.predictors.end(), p) != q.predictors.end()) {
      throw Error(ErrorCode::kSemantic, "duplicate predictor '" + p + "'", at);
    }
    q.predictors.push_back(std::move(p));
  }
  s.expect(')', "',' or ')'");
  const std::size_t after_args = s.pos();
  if (!s.seek_keyword("GIVEN")) {
    throw Error(ErrorCode::kSyntax, "missing GIVEN", after_args);
  }
  q.relation = s.attribute("relation name after GIVEN");
  return q;
}

std::string print(const PaqQuery& query) {
  std::string out = "PREDICT(" + query.target;
  for (const std::string& p : query.predictors) out += ", " + p;
  out += ") GIVEN " + query.relation;
  return out;
}

Catalog load_catalog(const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + dir);
  Catalog catalog;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
    catalog.emplace(entry.path().stem().string(), load_table(entry.path().string()));
  }
  return catalog;
}

Binding bind(const PaqQuery& query, const Catalog& catalog) {
  const auto rel = catalog.find(query.relation);
  if (rel == catalog.end()) {
    throw Error(ErrorCode::kBinding, "unknown relation '" + query.relation + "'");
  }
  const Table& table = rel->second;
  Binding b;
  b.relation = query.relation;
  const auto target = find_column(table, query.target);
  if (!target) {
    throw Error(ErrorCode::kBinding,
                "relation " + query.relation + " has no attribute '" + query.target + "'");
  }
  b.target = *target;
  if (query.predictors.empty()) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c != b.target) b.predictors.push_back(c);
    }
  } else {
    for (const std::string& p : query.predictors) {
      const auto col = find_column(table, p);
      if (!col) {
        throw Error(ErrorCode::kBinding,
                    "relation " + query.relation + " has no attribute '" + p + "'");
      }
      if (*col == b.target) {
        throw Error(ErrorCode::kBinding, "predictor '" + p + "' resolves to the target column");
      }
      b.predictors.push_back(*col);
    }
  }

  std::set<double> labels;
  const auto rows = table.values.rows();
  for (Eigen::Index r = 0; r < rows; ++r) {
    labels.insert(table.values(r, static_cast<Eigen::Index>(b.target)));
  }
  if (labels.size() != 2) {
    throw Error(ErrorCode::kBinding, "target '" + query.target + "' must have exactly two values, found " +
                                         std::to_string(labels.size()));
  }
  const double positive = *labels.rbegin();
  Matrix X(rows, static_cast<Eigen::Index>(b.predictors.size()));
  Vector y(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < b.predictors.size(); ++j) {
      X(r, static_cast<Eigen::Index>(j)) =
          table.values(r, static_cast<Eigen::Index>(b.predictors[j]));
    }
    y(r) = table.values(r, static_cast<Eigen::Index>(b.target)) == positive ? 1.0 : 0.0;
  }
  b.data = make_dataset(std::move(X), std::move(y));
  return b;
}

}  // namespace paq
