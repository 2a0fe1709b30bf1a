#ifndef QUADLAB_IO_HPP
#define QUADLAB_IO_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "quadlab/encodings.hpp"
#include "quadlab/planar_map.hpp"

namespace quadlab {

using Json = nlohmann::ordered_json;

// Map JSON format: {"darts": N, "alpha": [..], "sigma": [..], "root": 0}.
// Key order and dump format are fixed so files round-trip bit-exactly.
Json map_to_json(const HalfEdgeMap& m);
HalfEdgeMap map_from_json(const Json& j);

Json tree_to_json(const LabeledTree& t);
LabeledTree tree_from_json(const Json& j);

Json snake_to_json(const DiscreteSnake& s);
DiscreteSnake snake_from_json(const Json& j);

/// Canonical serialization: 2-space indent, trailing newline, UTF-8.
std::string dump_json(const Json& j);
Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

void write_text_file(const std::string& path, const std::string& text);

/// CSV with header row, unix newlines. Values are written verbatim.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);
    void add_row(const std::vector<std::string>& row);
    const std::string& text() const { return text_; }
    void write(const std::string& path) const;

private:
    std::size_t columns_;
    std::string text_;
};

std::string format_double(double x);

}  // namespace quadlab

#endif
