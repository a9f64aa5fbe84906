#include "lsvwip/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lsvwip {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& text, std::size_t line_no) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos == 0 || pos != text.size())
        throw ValidationError("line " + std::to_string(line_no) + ": '" + text + "' is not a number");
    return v;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
}

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

void write_step_path_csv(std::ostream& out, const StepPath& path) {
    if (path.domain_start() != 0.0) throw ValidationError("write_step_path_csv: path must start at 0");
    out << "T,initial_value\n";
    out << format_number(path.domain_end()) << ',' << format_number(path.initial_value()) << '\n';
    out << "breakpoint,value\n";
    for (std::size_t i = 0; i < path.breakpoints().size(); ++i)
        out << format_number(path.breakpoints()[i]) << ',' << format_number(path.values()[i]) << '\n';
}

StepPath read_step_path_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    const auto next = [&](bool required) {
        if (!std::getline(in, line)) {
            if (required) throw ValidationError("line " + std::to_string(line_no + 1) + ": unexpected end of file");
            return false;
        }
        ++line_no;
        line = strip_cr(line);
        return true;
    };
    next(true);
    if (line != "T,initial_value") throw ValidationError("line 1: expected header 'T,initial_value'");
    next(true);
    auto head = split_csv_line(line);
    if (head.size() != 2) throw ValidationError("line 2: expected 2 fields");
    const double end = parse_double(head[0], line_no);
    const double initial = parse_double(head[1], line_no);
    next(true);
    if (line != "breakpoint,value") throw ValidationError("line 3: expected header 'breakpoint,value'");
    std::vector<double> b;
    std::vector<double> v;
    while (next(false)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 2) throw ValidationError("line " + std::to_string(line_no) + ": expected 2 fields");
        const double t = parse_double(cells[0], line_no);
        if (!(t > (b.empty() ? 0.0 : b.back()) && t <= end))
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": breakpoints must be strictly increasing in (0, T]");
        b.push_back(t);
        v.push_back(parse_double(cells[1], line_no));
    }
    return StepPath(end, initial, std::move(b), std::move(v));
}

void save_step_path_csv(const std::filesystem::path& file, const StepPath& path) {
    std::ostringstream ss;
    write_step_path_csv(ss, path);
    write_text_file(file, ss.str());
}

StepPath load_step_path_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open " + file.string());
    return read_step_path_csv(in);
}

void write_density_csv(std::ostream& out, const DensityEstimate& density) {
    out << "bin_left,bin_right,mass\n";
    for (std::size_t i = 0; i < density.masses.size(); ++i)
        out << format_number(density.bin_edges[i]) << ',' << format_number(density.bin_edges[i + 1]) << ','
            << format_number(density.masses[i]) << '\n';
}

void write_excursions_csv(std::ostream& out, const std::vector<ExcursionSummary>& excursions) {
    out << "y,r,Phi,PhiStar,direction\n";
    for (const auto& e : excursions)
        out << format_number(e.start) << ',' << e.return_time << ',' << format_number(e.induced_value) << ','
            << format_number(e.phi_star) << ',' << to_string(e.direction) << '\n';
}

void write_partition_csv(std::ostream& out, const ReturnPartition& partition) {
    out << "n,left,right,measure_estimate\n";
    for (const auto& c : partition.cells)
        out << c.n << ',' << format_number(c.left) << ',' << format_number(c.right) << ','
            << format_number(c.measure_estimate) << '\n';
}

void write_table_csv(std::ostream& out, const Table& table) {
    for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_cell(table.columns[i]);
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
        out << '\n';
    }
}

void save_table_csv(const std::filesystem::path& file, const Table& table) {
    std::ostringstream ss;
    write_table_csv(ss, table);
    write_text_file(file, ss.str());
}

Json to_json(const MetricResult& result) {
    return Json{{"lower", result.lower}, {"upper", result.upper}, {"tolerance", result.tolerance}};
}

Json to_json(const StableLaw& law) {
    return Json{{"alpha", law.alpha}, {"c", law.c}, {"skew_sign", law.skew_sign}};
}

StableLaw stable_law_from_json(const Json& j) {
    StableLaw law;
    try {
        law.alpha = j.at("alpha").get<double>();
        law.c = j.at("c").get<double>();
        law.skew_sign = j.at("skew_sign").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("stable law JSON: ") + e.what());
    }
    law.validate();
    return law;
}

void write_text_file(const std::filesystem::path& file, const std::string& text) {
    if (file.has_parent_path()) std::filesystem::create_directories(file.parent_path());
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed for " + file.string());
}

}  // namespace lsvwip
