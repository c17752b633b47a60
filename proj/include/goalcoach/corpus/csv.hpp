// Copyright (C) 2026 The goalcoach Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <istream>
#include <string>
#include <vector>

namespace goalcoach {

struct CsvRow {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
/// breaks. Throws SchemaError on an unterminated quote.
std::vector<CsvRow> read_csv(std::istream& in);

/// Splits one line on every comma, ignoring quotes (the EmpatheticDialogues
/// release escapes commas inside fields as "_comma_").
std::vector<std::string> split_plain_csv_line(const std::string& line);

}  // namespace goalcoach
