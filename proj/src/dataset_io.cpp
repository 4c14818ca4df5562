#include <charconv>
#include <fstream>
#include <sstream>

#include "fuel/error.hpp"
#include "fuel/graph.hpp"
#include "fuel/text_io.hpp"
#include "json.hpp"

namespace fuel {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::MissingFile, path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

template <typename Fn>
void for_each_line(const std::string& text, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (!line.empty()) fn(line, line_no);
    start = end + 1;
  }
}

int parse_int(std::string_view token, const std::string& where) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  require(ec == std::errc() && ptr == token.data() + token.size(), ErrorCode::ParseError,
          where + ": expected integer, got '" + std::string(token) + "'");
  return value;
}

double parse_double(std::string_view token, const std::string& where) {
  while (!token.empty() && token.front() == ' ') token.remove_prefix(1);
  while (!token.empty() && token.back() == ' ') token.remove_suffix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  require(ec == std::errc() && ptr == token.data() + token.size(), ErrorCode::ParseError,
          where + ": expected number, got '" + std::string(token) + "'");
  return value;
}

std::vector<int> index_list(const json& node, const std::string& where) {
  require(node.is_array(), ErrorCode::ParseError, where + " must be an array");
  std::vector<int> out;
  out.reserve(node.size());
  for (const auto& v : node) {
    require(v.is_number_integer(), ErrorCode::ParseError, where + " must contain integers");
    out.push_back(v.get<int>());
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorCode::MissingFile, "cannot write " + path.string());
  out << content;
}

}  // namespace

Graph load_dataset(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  const fs::path edges_path = dir / "edges.tsv";
  const fs::path features_path = dir / "features.csv";
  for (const auto& p : {meta_path, edges_path, features_path}) {
    require(fs::exists(p), ErrorCode::MissingFile, p.string());
  }

  json meta;
  try {
    meta = json::parse(read_file(meta_path));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, meta_path.string() + ": " + e.what());
  }
  require(meta.contains("num_nodes") && meta["num_nodes"].is_number_integer(), ErrorCode::ParseError,
          "meta.json: num_nodes missing");
  require(meta.contains("feature_dim") && meta["feature_dim"].is_number_integer(), ErrorCode::ParseError,
          "meta.json: feature_dim missing");
  const int num_nodes = meta["num_nodes"].get<int>();
  const int feature_dim = meta["feature_dim"].get<int>();
  const int num_classes = meta.value("num_classes", -1);
  const std::string name = meta.value("name", dir.filename().string());

  std::vector<NodePair> edges;
  for_each_line(read_file(edges_path), [&](std::string_view line, std::size_t line_no) {
    const std::string where = "edges.tsv line " + std::to_string(line_no);
    const auto tab = line.find('\t');
    require(tab != std::string_view::npos, ErrorCode::ParseError, where + ": expected 'u<TAB>v'");
    const int u = parse_int(line.substr(0, tab), where);
    const int v = parse_int(line.substr(tab + 1), where);
    require(u >= 0 && u < num_nodes && v >= 0 && v < num_nodes, ErrorCode::IndexOutOfRange,
            where + ": node index out of [0, " + std::to_string(num_nodes) + ")");
    require(u != v, ErrorCode::SelfLoop, where + ": " + std::to_string(u) + "-" + std::to_string(v));
    edges.emplace_back(u, v);
  });

  Matrix features(num_nodes, feature_dim);
  int row = 0;
  for_each_line(read_file(features_path), [&](std::string_view line, std::size_t line_no) {
    const std::string where = "features.csv line " + std::to_string(line_no);
    require(row < num_nodes, ErrorCode::ShapeMismatch, "features.csv has more than " + std::to_string(num_nodes) + " rows");
    int col = 0;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string_view::npos) end = line.size();
      require(col < feature_dim, ErrorCode::ShapeMismatch, where + ": more than " + std::to_string(feature_dim) + " columns");
      features(row, col++) = parse_double(line.substr(start, end - start), where);
      start = end + 1;
    }
    require(col == feature_dim, ErrorCode::ShapeMismatch,
            where + ": " + std::to_string(col) + " columns, expected " + std::to_string(feature_dim));
    ++row;
  });
  require(row == num_nodes, ErrorCode::ShapeMismatch,
          "features.csv has " + std::to_string(row) + " rows, expected " + std::to_string(num_nodes));

  Labels labels;
  if (fs::exists(dir / "labels.txt")) {
    for_each_line(read_file(dir / "labels.txt"), [&](std::string_view line, std::size_t line_no) {
      labels.push_back(parse_int(line, "labels.txt line " + std::to_string(line_no)));
    });
    require(static_cast<int>(labels.size()) == num_nodes, ErrorCode::ShapeMismatch,
            "labels.txt has " + std::to_string(labels.size()) + " lines, expected " + std::to_string(num_nodes));
  }

  std::vector<Split> splits;
  if (fs::exists(dir / "splits.json")) {
    json doc;
    try {
      doc = json::parse(read_file(dir / "splits.json"));
    } catch (const json::exception& e) {
      fail(ErrorCode::ParseError, "splits.json: " + std::string(e.what()));
    }
    require(doc.is_array(), ErrorCode::ParseError, "splits.json must be an array");
    for (std::size_t s = 0; s < doc.size(); ++s) {
      const std::string where = "splits.json[" + std::to_string(s) + "]";
      Split split;
      split.train = index_list(doc[s].value("train", json::array()), where + ".train");
      split.val = index_list(doc[s].value("val", json::array()), where + ".val");
      split.test = index_list(doc[s].value("test", json::array()), where + ".test");
      splits.push_back(std::move(split));
    }
  }

  return make_graph(name, num_nodes, edges, std::move(features), std::move(labels), std::move(splits), num_classes);
}

void save_dataset(const Graph& graph, const fs::path& dir) {
  validate(graph);
  fs::create_directories(dir);
  json meta = {{"name", graph.name},
               {"num_nodes", graph.num_nodes},
               {"feature_dim", graph.feature_dim()},
               {"num_classes", graph.num_classes}};
  write_file(dir / "meta.json", meta.dump(2) + "\n");

  std::string edges;
  for (auto [u, v] : graph.edges()) edges += std::to_string(u) + '\t' + std::to_string(v) + '\n';
  write_file(dir / "edges.tsv", edges);

  write_file(dir / "features.csv", matrix_to_csv(graph.features));

  if (graph.has_labels()) {
    std::string labels;
    for (int l : graph.labels) labels += std::to_string(l) + '\n';
    write_file(dir / "labels.txt", labels);
  }
  if (!graph.splits.empty()) {
    json doc = json::array();
    for (const auto& s : graph.splits) doc.push_back({{"train", s.train}, {"val", s.val}, {"test", s.test}});
    write_file(dir / "splits.json", doc.dump() + "\n");
  }
}

}  // namespace fuel
