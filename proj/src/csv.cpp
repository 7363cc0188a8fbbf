#include "zl/csv.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "zl/constants.hpp"
#include "zl/errors.hpp"

namespace zl {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void atomic_write_text(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out << content;
        if (!out.flush()) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + tmp + " -> " + path + ": " + ec.message());
}

std::string CsvDoc::to_string() const {
    std::ostringstream out;
    for (const auto& c : leading_comments) out << "# " << c << "\n";
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    if (!header.empty()) out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
    for (const auto& c : trailing_comments) out << "# " << c << "\n";
    return out.str();
}

void write_csv(const std::string& path, const CsvDoc& doc) {
    atomic_write_text(path, doc.to_string());
}

void write_ladder_csv(const std::string& path, const LadderTable& table) {
    CsvDoc doc;
    doc.leading_comments.push_back(
        "anchor_t=" + format_real(table.anchor_t) + " anchor_phi=" +
        format_real(table.anchor_phi) + " mode=" + to_string(table.mode) +
        " panel_width=" + format_real(table.quad.panel_width) +
        " gl_order=" + std::to_string(table.quad.gl_order));
    doc.leading_comments.push_back(
        "t_min=" + format_real(table.rs.t_min) +
        " correction_order=" + std::to_string(table.rs.correction_order) +
        " checkpoint_stride=" + std::to_string(table.quad.checkpoint_stride));
    doc.header = {"t", "phi1"};
    doc.rows.reserve(table.cp_t.size());
    for (size_t i = 0; i < table.cp_t.size(); ++i) {
        doc.rows.push_back({format_real(table.cp_t[i]), format_real(table.cp_phi[i])});
    }
    write_csv(path, doc);
}

namespace {

double parse_real(const std::string& text, const std::string& context) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw IoError("bad real '" + text + "' in " + context);
    }
    return v;
}

// key=value pairs from a metadata comment line.
void parse_pairs(const std::string& line,
                 std::vector<std::pair<std::string, std::string>>& out) {
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) {
        const size_t eq = tok.find('=');
        if (eq == std::string::npos) continue;
        out.emplace_back(tok.substr(0, eq), tok.substr(eq + 1));
    }
}

} // namespace

LadderTable load_ladder_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open ladder file: " + path);

    LadderTable table;
    std::vector<std::pair<std::string, std::string>> meta;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            parse_pairs(line.substr(1), meta);
            continue;
        }
        if (!header_seen) {
            if (line != "t,phi1") throw IoError("ladder file missing 't,phi1' header: " + path);
            header_seen = true;
            continue;
        }
        const size_t comma = line.find(',');
        if (comma == std::string::npos) throw IoError("bad ladder row: " + line);
        table.cp_t.push_back(parse_real(line.substr(0, comma), path));
        table.cp_phi.push_back(parse_real(line.substr(comma + 1), path));
    }
    if (!header_seen || table.cp_t.size() < 2) {
        throw IoError("ladder file truncated: " + path);
    }

    bool have_anchor = false, have_phi = false, have_mode = false;
    for (const auto& [key, value] : meta) {
        if (key == "anchor_t") { table.anchor_t = parse_real(value, path); have_anchor = true; }
        else if (key == "anchor_phi") { table.anchor_phi = parse_real(value, path); have_phi = true; }
        else if (key == "mode") { table.mode = parse_weight_mode(value); have_mode = true; }
        else if (key == "panel_width") table.quad.panel_width = parse_real(value, path);
        else if (key == "gl_order") table.quad.gl_order = int(parse_real(value, path));
        else if (key == "checkpoint_stride") table.quad.checkpoint_stride = int(parse_real(value, path));
        else if (key == "t_min") table.rs.t_min = parse_real(value, path);
        else if (key == "correction_order") table.rs.correction_order = int(parse_real(value, path));
    }
    if (!have_anchor || !have_phi || !have_mode) {
        throw IoError("ladder file missing anchor_t/anchor_phi/mode metadata: " + path);
    }
    table.t_max = table.cp_t.back();
    try {
        table.validate();
    } catch (const DomainError& e) {
        throw IoError("ladder file inconsistent: " + path + ": " + e.what());
    }
    return table;
}

void write_gram_csv(const std::string& path, const GramReport& report) {
    CsvDoc doc;
    const size_t dim = report.dim();
    doc.header.reserve(dim);
    for (size_t i = 0; i < dim; ++i) doc.header.push_back(GramReport::basis_label(i));
    doc.rows.reserve(dim);
    for (size_t i = 0; i < dim; ++i) {
        std::vector<std::string> row(dim);
        for (size_t j = 0; j < dim; ++j) row[j] = format_real(report.entry(i, j));
        doc.rows.push_back(std::move(row));
    }
    doc.trailing_comments.push_back("max_abs_deviation=" +
                                    format_real(report.max_abs_deviation));
    write_csv(path, doc);
}

void write_quantize_csv(const std::string& path, const QuantizeResult& result) {
    CsvDoc doc;
    doc.leading_comments.push_back("two_l=" + format_real(result.two_l) +
                                   " K=" + std::to_string(result.K));
    doc.header = {"r", "point", "slab_integral", "volume"};
    for (size_t r = 0; r < result.points.size(); ++r) {
        std::vector<std::string> row(4);
        row[0] = std::to_string(r + 1);
        row[1] = format_real(result.points[r]);
        if (r < result.slab_integrals.size()) {
            row[2] = format_real(result.slab_integrals[r]);
            row[3] = format_real(kPi * result.slab_integrals[r]);
        } else {
            row[2] = "";
            row[3] = "";
        }
        doc.rows.push_back(std::move(row));
    }
    write_csv(path, doc);
}

} // namespace zl
