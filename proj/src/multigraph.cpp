#include "thc/multigraph.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>
#include <deque>
#include <limits>
#include <queue>
#include <sstream>

#include "json.hpp"

#include "thc/bytes.hpp"
#include "thc/errors.hpp"

namespace thc {

namespace {

LabelSet normalise(LabelSet labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  return labels;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

}  // namespace

ElementKey ElementKey::edge(VertexId a, VertexId b, std::uint32_t counter) {
  if (b < a) std::swap(a, b);
  return {ElementKind::edge, std::move(a), std::move(b), counter};
}

std::string ElementKey::describe() const {
  if (is_vertex()) return "vertex " + u;
  if (is_loop()) return "loop " + u + "#" + std::to_string(counter);
  return "edge " + u + "-" + v;
}

// ---------------------------------------------------------------- builder

GraphBuilder& GraphBuilder::add_vertex(const VertexId& id, LabelSet labels) {
  if (id.empty()) problems_.push_back("vertex with empty id");
  if (!vertices_.emplace(id, normalise(std::move(labels))).second) problems_.push_back("duplicate vertex " + id);
  return *this;
}

GraphBuilder& GraphBuilder::add_edge(const VertexId& u, const VertexId& v, LabelSet labels) {
  if (u == v) {
    problems_.push_back("edge " + u + "-" + v + " is a loop; declare loops with a counter");
    return *this;
  }
  edges_.emplace_back(ElementKey::edge(u, v), normalise(std::move(labels)));
  return *this;
}

GraphBuilder& GraphBuilder::add_loop(const VertexId& v, LabelSet labels, std::uint32_t counter) {
  if (counter == 0) {
    std::uint32_t next = 1;
    for (const auto& [k, _] : edges_)
      if (k.is_loop() && k.u == v) next = std::max(next, k.counter + 1);
    counter = next;
  }
  edges_.emplace_back(ElementKey::edge(v, v, counter), normalise(std::move(labels)));
  return *this;
}

GraphBuilder& GraphBuilder::add_boundary(const VertexId& id) {
  boundary_.insert(id);
  return *this;
}

Multigraph GraphBuilder::build() const {
  std::vector<std::string> problems = problems_;
  Multigraph g;
  g.vertices_ = vertices_;
  for (const auto& [id, _] : vertices_) g.adjacency_[id];

  for (const auto& [key, labels] : edges_) {
    bool ok = true;
    for (const auto* end : {&key.u, &key.v}) {
      if (!vertices_.count(*end)) {
        problems.push_back(key.describe() + ": undeclared vertex " + *end);
        ok = false;
      }
    }
    if (!ok) continue;
    if (!key.is_loop() && g.edges_.count(key)) {
      problems.push_back(key.describe() + ": parallel edges between distinct vertices are not supported");
      continue;
    }
    if (key.is_loop() && g.edges_.count(key)) {
      problems.push_back(key.describe() + ": duplicate loop counter");
      continue;
    }
    g.edges_.emplace(key, labels);
    if (key.is_loop()) {
      ++g.loops_[key.u];
    } else {
      g.adjacency_[key.u].push_back(key.v);
      g.adjacency_[key.v].push_back(key.u);
    }
  }
  // Loop counters at each vertex must be exactly 1..count.
  for (const auto& [v, count] : g.loops_) {
    for (std::uint32_t c = 1; c <= count; ++c) {
      if (!g.edges_.count(ElementKey::edge(v, v, c))) {
        problems.push_back("loops at " + v + ": counters must be 1.." + std::to_string(count));
        break;
      }
    }
  }
  for (const auto& b : boundary_) {
    if (!vertices_.count(b)) problems.push_back("boundary: undeclared vertex " + b);
  }
  if (!problems.empty()) throw InputError("invalid graph: " + join(problems, "; "));
  g.boundary_ = boundary_;
  for (auto& [_, nbrs] : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

// ---------------------------------------------------------------- graph

bool Multigraph::has_element(const ElementKey& key) const {
  return key.is_vertex() ? has_vertex(key.u) : edges_.count(key) != 0;
}

const LabelSet& Multigraph::labels(const ElementKey& key) const {
  if (key.is_vertex()) {
    auto it = vertices_.find(key.u);
    if (it == vertices_.end()) throw InputError("unknown vertex " + key.u);
    return it->second;
  }
  auto it = edges_.find(key);
  if (it == edges_.end()) throw InputError("unknown " + key.describe());
  return it->second;
}

const std::vector<VertexId>& Multigraph::neighbours(const VertexId& id) const {
  auto it = adjacency_.find(id);
  if (it == adjacency_.end()) throw InputError("unknown vertex " + id);
  return it->second;
}

bool Multigraph::adjacent(const VertexId& a, const VertexId& b) const {
  return a != b && edges_.count(ElementKey::edge(a, b)) != 0;
}

std::uint32_t Multigraph::loop_count(const VertexId& id) const {
  auto it = loops_.find(id);
  return it == loops_.end() ? 0 : it->second;
}

std::vector<ElementKey> Multigraph::elements() const {
  std::vector<ElementKey> out;
  out.reserve(dimension());
  for (const auto& [id, _] : vertices_) out.push_back(ElementKey::vertex(id));
  for (const auto& [key, _] : edges_) out.push_back(key);
  return out;
}

GraphBuilder Multigraph::to_builder() const {
  GraphBuilder b;
  for (const auto& [id, labels] : vertices_) b.add_vertex(id, labels);
  for (const auto& [key, labels] : edges_) {
    if (key.is_loop())
      b.add_loop(key.u, labels, key.counter);
    else
      b.add_edge(key.u, key.v, labels);
  }
  for (const auto& id : boundary_) b.add_boundary(id);
  return b;
}

// ---------------------------------------------------------------- paths

void validate_path(const Multigraph& g, const Path& p) {
  if (p.steps.empty()) throw StructuralError("path has no edges");
  if (p.real_length < 1 || p.real_length > p.steps.size()) throw StructuralError("path real length out of range");
  if (p.steps.front().from != p.source) throw StructuralError("path does not start at its source");
  std::set<ElementKey> used;
  VertexId at = p.source;
  for (std::size_t i = 0; i < p.steps.size(); ++i) {
    const auto& s = p.steps[i];
    if (s.from != at) throw StructuralError("path steps " + std::to_string(i) + " and " + std::to_string(i + 1) + " do not share a vertex");
    const auto& pad_at = p.padded_at_source ? p.source : p.terminal;
    bool padding = p.padded_at_source ? i < p.steps.size() - p.real_length : i >= p.real_length;
    if (padding != (s.counter != 0)) throw StructuralError("loops may only appear as padding");
    if (padding && (s.from != pad_at || s.to != pad_at))
      throw StructuralError(std::string("padding loop not at the ") + (p.padded_at_source ? "source" : "terminal"));
    if (!padding && s.from == s.to) throw StructuralError("real path step is a loop");
    auto key = s.key();
    if (!g.has_element(key)) throw StructuralError("path uses missing " + key.describe());
    if (!used.insert(key).second) throw StructuralError("path reuses " + key.describe());
    at = s.to;
  }
  if (at != p.terminal) throw StructuralError("path does not end at its terminal");
}

std::map<VertexId, std::size_t> hop_distances(const Multigraph& g, const VertexId& from) {
  if (!g.has_vertex(from)) throw InputError("unknown vertex " + from);
  std::map<VertexId, std::size_t> dist{{from, 0}};
  std::deque<VertexId> queue{from};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    for (const auto& w : g.neighbours(v)) {
      if (dist.emplace(w, dist[v] + 1).second) queue.push_back(w);
    }
  }
  return dist;
}

namespace {

Path path_from_parents(const std::map<VertexId, VertexId>& parent, const VertexId& from, const VertexId& to) {
  std::vector<VertexId> rev{to};
  while (rev.back() != from) rev.push_back(parent.at(rev.back()));
  Path p{from, to, {}, 0};
  for (std::size_t i = rev.size() - 1; i > 0; --i) p.steps.push_back({rev[i], rev[i - 1], 0});
  p.real_length = p.steps.size();
  return p;
}

void check_endpoints(const Multigraph& g, const VertexId& from, const VertexId& to) {
  if (!g.has_vertex(from)) throw InputError("unknown vertex " + from);
  if (!g.has_vertex(to)) throw InputError("unknown vertex " + to);
  if (from == to) throw StructuralError("path endpoints coincide; a path needs at least one edge");
}

}  // namespace

std::optional<Path> shortest_path(const Multigraph& g, const VertexId& from, const VertexId& to) {
  check_endpoints(g, from, to);
  std::map<VertexId, VertexId> parent;
  std::set<VertexId> seen{from};
  std::deque<VertexId> queue{from};
  while (!queue.empty()) {
    auto v = queue.front();
    queue.pop_front();
    if (v == to) return path_from_parents(parent, from, to);
    for (const auto& w : g.neighbours(v)) {
      if (seen.insert(w).second) {
        parent[w] = v;
        queue.push_back(w);
      }
    }
  }
  return std::nullopt;
}

std::optional<Path> cheapest_path(const Multigraph& g, const VertexId& from, const VertexId& to,
                                  const EdgeCost& cost) {
  check_endpoints(g, from, to);
  using Entry = std::pair<std::uint64_t, VertexId>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  std::map<VertexId, std::uint64_t> best{{from, 0}};
  std::map<VertexId, VertexId> parent;
  heap.emplace(0, from);
  while (!heap.empty()) {
    auto [d, v] = heap.top();
    heap.pop();
    if (d != best[v]) continue;
    if (v == to) return path_from_parents(parent, from, to);
    for (const auto& w : g.neighbours(v)) {
      auto nd = d + cost(v, w);
      auto it = best.find(w);
      if (it == best.end() || nd < it->second) {
        best[w] = nd;
        parent[w] = v;
        heap.emplace(nd, w);
      }
    }
  }
  return std::nullopt;
}

std::size_t padding_target(const Multigraph& g) {
  if (g.boundary().empty()) throw StructuralError("empty boundary set");
  std::size_t target = 0;
  for (const auto& b : g.boundary()) {
    // Undirected, so distances from b are distances to b.
    auto dist = hop_distances(g, b);
    for (const auto& [v, _] : g.vertices()) {
      auto it = dist.find(v);
      if (it == dist.end()) throw StructuralError("vertex " + v + " cannot reach boundary node " + b);
      target = std::max(target, it->second);
    }
  }
  return target;
}

Multigraph augment(const Multigraph& g, std::size_t loops) {
  if (loops < 1) throw InputError("augmentation needs at least one loop per boundary node");
  auto builder = g.to_builder();
  for (const auto& b : g.boundary()) {
    auto first = g.loop_count(b) + 1;
    for (std::size_t i = 0; i < loops; ++i) builder.add_loop(b, {}, static_cast<std::uint32_t>(first + i));
  }
  return builder.build();
}

Path pad_path(const Path& p, const Multigraph& augmented, std::size_t length, PadEnd end) {
  if (p.real_length > length) throw InputError("path longer than the padding target");
  if (p.steps.size() != p.real_length) throw InputError("path is already padded");
  Path out = p;
  out.padded_at_source = end == PadEnd::source;
  const auto& at = out.padded_at_source ? p.source : p.terminal;
  std::vector<PathStep> loops;
  const auto available = augmented.loop_count(at);
  for (std::uint32_t counter = 1; p.real_length + loops.size() < length; ++counter) {
    if (counter > available)
      throw StructuralError(std::string(out.padded_at_source ? "source " : "terminal ") + at +
                            " has too few loops to pad to length " + std::to_string(length));
    loops.push_back({at, at, counter});
  }
  if (out.padded_at_source) out.steps.insert(out.steps.begin(), loops.begin(), loops.end());
  else out.steps.insert(out.steps.end(), loops.begin(), loops.end());
  validate_path(augmented, out);
  return out;
}

// ---------------------------------------------------------------- JSON

namespace {

// Records the source line of every value so schema errors can point at it.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : s_(text) {
    skip_ws();
    value("");
  }

  std::size_t line_of(const std::string& pointer) const {
    std::string p = pointer;
    while (true) {
      auto it = lines_.find(p);
      if (it != lines_.end()) return it->second;
      auto slash = p.rfind('/');
      if (slash == std::string::npos || p.empty()) return 1;
      p.resize(slash);
    }
  }

 private:
  void skip_ws() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
      if (s_[i_] == '\n') ++line_;
      ++i_;
    }
  }
  std::string string_token() {
    std::string out;
    ++i_;
    while (i_ < s_.size() && s_[i_] != '"') {
      if (s_[i_] == '\\') ++i_;
      if (i_ < s_.size()) out.push_back(s_[i_++]);
    }
    ++i_;
    return out;
  }
  void value(const std::string& ptr) {
    if (i_ >= s_.size()) return;
    lines_.emplace(ptr, line_);
    char c = s_[i_];
    if (c == '{') {
      ++i_;
      skip_ws();
      while (i_ < s_.size() && s_[i_] != '}') {
        auto key = string_token();
        skip_ws();
        ++i_;  // ':'
        skip_ws();
        value(ptr + "/" + key);
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        skip_ws();
      }
      ++i_;
    } else if (c == '[') {
      ++i_;
      skip_ws();
      std::size_t idx = 0;
      while (i_ < s_.size() && s_[i_] != ']') {
        value(ptr + "/" + std::to_string(idx++));
        skip_ws();
        if (i_ < s_.size() && s_[i_] == ',') ++i_;
        skip_ws();
      }
      ++i_;
    } else if (c == '"') {
      string_token();
    } else {
      while (i_ < s_.size() && !std::strchr(",]} \t\r\n", s_[i_])) ++i_;
    }
  }

  const std::string& s_;
  std::size_t i_ = 0;
  std::size_t line_ = 1;
  std::map<std::string, std::size_t> lines_;
};

using nlohmann::json;

}  // namespace

Multigraph graph_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("graph file is not valid JSON: ") + e.what());
  }
  LineIndex lines(text);
  std::vector<std::string> problems;
  auto complain = [&](const std::string& ptr, const std::string& msg) {
    problems.push_back("line " + std::to_string(lines.line_of(ptr)) + " (" + (ptr.empty() ? "/" : ptr) + "): " + msg);
  };
  auto string_list = [&](const json& node, const std::string& ptr) {
    LabelSet out;
    if (node.is_null()) return out;
    if (!node.is_array()) {
      complain(ptr, "expected an array of strings");
      return out;
    }
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (!node[i].is_string())
        complain(ptr + "/" + std::to_string(i), "expected a string");
      else
        out.push_back(node[i].get<std::string>());
    }
    return out;
  };
  auto string_field = [&](const json& obj, const std::string& ptr, const char* name) -> std::optional<std::string> {
    if (!obj.contains(name) || !obj[name].is_string() || obj[name].get<std::string>().empty()) {
      complain(ptr + "/" + name, std::string("missing or non-string field '") + name + "'");
      return std::nullopt;
    }
    return obj[name].get<std::string>();
  };

  if (!doc.is_object()) throw InputError("graph file: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "vertices" && key != "edges" && key != "loops" && key != "boundary")
      complain("/" + key, "unknown field '" + key + "'");
  }
  GraphBuilder b;
  auto section = [&](const char* name) -> const json* {
    if (!doc.contains(name)) return nullptr;
    if (!doc[name].is_array()) {
      complain(std::string("/") + name, "expected an array");
      return nullptr;
    }
    return &doc[name];
  };
  if (!doc.contains("vertices")) complain("/vertices", "missing field 'vertices'");
  if (const auto* vs = section("vertices")) {
    for (std::size_t i = 0; i < vs->size(); ++i) {
      auto ptr = "/vertices/" + std::to_string(i);
      const auto& v = (*vs)[i];
      if (!v.is_object()) {
        complain(ptr, "expected an object");
        continue;
      }
      auto id = string_field(v, ptr, "id");
      auto labels = string_list(v.value("labels", json()), ptr + "/labels");
      if (id) b.add_vertex(*id, labels);
    }
  }
  if (const auto* es = section("edges")) {
    for (std::size_t i = 0; i < es->size(); ++i) {
      auto ptr = "/edges/" + std::to_string(i);
      const auto& e = (*es)[i];
      if (!e.is_object()) {
        complain(ptr, "expected an object");
        continue;
      }
      auto u = string_field(e, ptr, "u");
      auto v = string_field(e, ptr, "v");
      auto labels = string_list(e.value("labels", json()), ptr + "/labels");
      if (u && v) {
        if (*u == *v)
          complain(ptr, "self-edge; declare it under 'loops' with a counter");
        else
          b.add_edge(*u, *v, labels);
      }
    }
  }
  if (const auto* ls = section("loops")) {
    for (std::size_t i = 0; i < ls->size(); ++i) {
      auto ptr = "/loops/" + std::to_string(i);
      const auto& l = (*ls)[i];
      if (!l.is_object()) {
        complain(ptr, "expected an object");
        continue;
      }
      auto v = string_field(l, ptr, "v");
      auto labels = string_list(l.value("labels", json()), ptr + "/labels");
      std::uint32_t counter = 0;
      if (!l.contains("counter") || !l["counter"].is_number_unsigned() || l["counter"].get<std::uint64_t>() == 0 ||
          l["counter"].get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
        complain(ptr + "/counter", "loop counter must be a positive integer");
      } else {
        counter = l["counter"].get<std::uint32_t>();
      }
      if (v && counter) b.add_loop(*v, labels, counter);
    }
  }
  if (doc.contains("boundary")) {
    for (const auto& id : string_list(doc["boundary"], "/boundary")) b.add_boundary(id);
  }
  if (!problems.empty()) throw InputError("graph schema violations:\n  " + join(problems, "\n  "));
  return b.build();
}

std::string graph_to_json(const Multigraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const auto& [id, labels] : g.vertices()) doc["vertices"].push_back({{"id", id}, {"labels", labels}});
  doc["edges"] = json::array();
  doc["loops"] = json::array();
  for (const auto& [key, labels] : g.edges()) {
    if (key.is_loop())
      doc["loops"].push_back({{"v", key.u}, {"labels", labels}, {"counter", key.counter}});
    else
      doc["edges"].push_back({{"u", key.u}, {"v", key.v}, {"labels", labels}});
  }
  doc["boundary"] = std::vector<std::string>(g.boundary().begin(), g.boundary().end());
  return doc.dump(2) + "\n";
}

Multigraph load_graph(const std::string& path) {
  auto bytes = read_file(path);
  return graph_from_json(std::string(bytes.begin(), bytes.end()));
}

void save_graph(const std::string& path, const Multigraph& g) { write_file(path, as_bytes(graph_to_json(g))); }

std::string graph_digest_hex(const Multigraph& g) { return to_hex(sha256(as_bytes(graph_to_json(g)))); }

}  // namespace thc
