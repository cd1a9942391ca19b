#include "itksf/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "itksf/error.hpp"

namespace itksf {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_double(const std::string& field, int line_no) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("cannot parse number '" + field + "'", line_no);
    return value;
}

std::optional<int> parse_label(const std::string& field, int line_no) {
    if (field.empty()) return std::nullopt;
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("cannot parse label '" + field + "'", line_no);
    return value;
}

DataSet load_table(const std::string& path, DataSet::Coords coords) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    const bool pairs = coords == DataSet::Coords::Correspondences;
    const std::vector<std::string> expected =
        pairs ? std::vector<std::string>{"x1", "y1", "x2", "y2", "label"}
              : std::vector<std::string>{"x", "y", "label"};

    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    const auto header = split_fields(line);
    for (const auto& name : expected)
        if (std::find(header.begin(), header.end(), name) == header.end())
            throw MissingColumn("header of " + path + " lacks column '" + name + "'");
    if (header != expected)
        throw ParseError("unexpected column order; expected " +
                             [&] {
                                 std::string s;
                                 for (const auto& n : expected) {
                                     if (!s.empty()) s += ',';
                                     s += n;
                                 }
                                 return s;
                             }(),
                         1);

    DataSet out;
    out.coords = coords;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != expected.size())
            throw ParseError("expected " + std::to_string(expected.size()) + " fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        Datum d;
        d.x1 = parse_double(fields[0], line_no);
        d.y1 = parse_double(fields[1], line_no);
        if (pairs) {
            d.x2 = parse_double(fields[2], line_no);
            d.y2 = parse_double(fields[3], line_no);
        }
        d.label = parse_label(fields.back(), line_no);
        out.data.push_back(d);
    }
    return out;
}

std::string format_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

DataSet load_correspondences(const std::string& path) {
    return load_table(path, DataSet::Coords::Correspondences);
}

DataSet load_points(const std::string& path) { return load_table(path, DataSet::Coords::Points2D); }

DataSet load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty file", 1);
    const auto header = split_fields(line);
    in.close();
    if (header == std::vector<std::string>{"x1", "y1", "x2", "y2", "label"})
        return load_correspondences(path);
    if (header == std::vector<std::string>{"x", "y", "label"}) return load_points(path);
    throw MissingColumn("header of " + path +
                        " matches neither x,y,label nor x1,y1,x2,y2,label");
}

void save_dataset(const std::string& path, const DataSet& data) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    const bool pairs = data.coords == DataSet::Coords::Correspondences;
    out << (pairs ? "x1,y1,x2,y2,label" : "x,y,label") << '\n';
    for (const Datum& d : data.data) {
        out << format_value(d.x1) << ',' << format_value(d.y1);
        if (pairs) out << ',' << format_value(d.x2) << ',' << format_value(d.y2);
        out << ',';
        if (d.label) out << *d.label;
        out << '\n';
    }
}

}  // namespace itksf
