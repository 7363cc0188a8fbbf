#pragma once

#include <string>
#include <vector>

#include "zl/harmonics.hpp"
#include "zl/ladder.hpp"

namespace zl {

// Round-trip exact for 64-bit floats (17 significant digits).
std::string format_real(double x);

// Write-to-temp then rename, so readers never observe a partial file.
void atomic_write_text(const std::string& path, const std::string& content);

// Generic CSV with '#'-prefixed metadata comments.
struct CsvDoc {
    std::vector<std::string> leading_comments;  // without the "# " prefix
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> trailing_comments; // without the "# " prefix

    std::string to_string() const;
};

void write_csv(const std::string& path, const CsvDoc& doc);

// Ladder checkpoint file: metadata comments, then header `t,phi1`.
void write_ladder_csv(const std::string& path, const LadderTable& table);
LadderTable load_ladder_csv(const std::string& path); // throws IoError

void write_gram_csv(const std::string& path, const GramReport& report);
void write_quantize_csv(const std::string& path, const QuantizeResult& result);

} // namespace zl
