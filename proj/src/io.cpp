#include "quadlab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "quadlab/errors.hpp"

namespace quadlab {

Json map_to_json(const HalfEdgeMap& m) {
    Json j;
    j["darts"] = m.dart_count();
    j["alpha"] = m.alpha_perm();
    j["sigma"] = m.sigma_perm();
    j["root"] = m.root();
    return j;
}

HalfEdgeMap map_from_json(const Json& j) {
    if (!j.contains("darts") || !j.contains("alpha") || !j.contains("sigma") || !j.contains("root"))
        throw IOError("map json needs darts, alpha, sigma, root");
    std::vector<int> alpha = j["alpha"].get<std::vector<int>>();
    std::vector<int> sigma = j["sigma"].get<std::vector<int>>();
    if (static_cast<int>(alpha.size()) != j["darts"].get<int>())
        throw IOError("dart count disagrees with alpha length");
    return build_map(std::move(alpha), std::move(sigma), j["root"].get<int>());
}

Json tree_to_json(const LabeledTree& t) {
    Json j;
    j["vertices"] = t.vertex_count();
    j["parent"] = t.parent;
    j["children"] = t.children;
    j["label"] = t.label;
    j["root"] = t.root;
    return j;
}

LabeledTree tree_from_json(const Json& j) {
    LabeledTree t;
    t.parent = j.at("parent").get<std::vector<int>>();
    t.children = j.at("children").get<std::vector<std::vector<int>>>();
    t.label = j.at("label").get<std::vector<int>>();
    t.root = j.at("root").get<int>();
    t.validate();
    return t;
}

Json snake_to_json(const DiscreteSnake& s) {
    Json j;
    j["steps"] = s.step_count();
    j["zeta"] = s.zeta;
    j["paths"] = s.paths;
    return j;
}

DiscreteSnake snake_from_json(const Json& j) {
    DiscreteSnake s;
    s.zeta = j.at("zeta").get<std::vector<int>>();
    s.paths = j.at("paths").get<std::vector<std::vector<int>>>();
    s.validate();
    return s;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IOError("cannot open " + path);
    Json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IOError("cannot parse " + path + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const Json& j) {
    write_text_file(path, dump_json(j));
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IOError("cannot open " + path + " for writing");
    out << text;
    if (!out) throw IOError("write failed: " + path);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void CsvWriter::add_row(const std::vector<std::string>& row) {
    if (row.size() != columns_) throw Error("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) text_ += ',';
        text_ += row[i];
    }
    text_ += '\n';
}

void CsvWriter::write(const std::string& path) const { write_text_file(path, text_); }

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", x);
    return buf;
}

}  // namespace quadlab
