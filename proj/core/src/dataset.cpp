#include "mevolve/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string_view>

#include "mevolve/errors.hpp"
#include "mevolve/rng.hpp"

namespace mevolve {

void GraphDataset::validate() const {
  if (graphs.empty()) throw InputError("dataset '" + name + "' is empty");
  if (graphs.size() != labels.size()) {
    throw InputError("dataset '" + name + "': graph and label counts differ");
  }
  if (label_vocab.size() < 2) {
    throw InputError("dataset '" + name + "' needs at least two classes");
  }
  for (ClassLabel y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= label_vocab.size()) {
      throw InputError("dataset '" + name + "': class index out of range");
    }
  }
}

// ---------------------------------------------------------------------------
// TU text format

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct NumberedLines {
  std::string file;
  std::vector<std::string> lines;
};

NumberedLines read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  NumberedLines out{path.string(), {}};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.lines.push_back(std::move(line));
  }
  while (!out.lines.empty() && trim(out.lines.back()).empty()) out.lines.pop_back();
  return out;
}

std::int64_t parse_int(std::string_view token, const std::string& file, std::size_t line) {
  token = trim(token);
  std::int64_t value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (token.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(file, line, "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

GraphDataset load_tu_dataset(const std::filesystem::path& directory, const std::string& name,
                             LoadDiagnostics* diagnostics) {
  const auto edge_file = read_lines(directory / (name + "_A.txt"));
  const auto indicator_file = read_lines(directory / (name + "_graph_indicator.txt"));
  const auto label_file = read_lines(directory / (name + "_graph_labels.txt"));

  std::vector<std::int64_t> raw_labels;
  raw_labels.reserve(label_file.lines.size());
  for (std::size_t i = 0; i < label_file.lines.size(); ++i) {
    raw_labels.push_back(parse_int(label_file.lines[i], label_file.file, i + 1));
  }
  const std::size_t graph_count = raw_labels.size();
  if (graph_count == 0) throw ParseError(label_file.file, 1, "no graph labels");

  // global vertex -> (graph, local id)
  std::vector<std::size_t> graph_of;
  std::vector<Vertex> local_of;
  std::vector<std::size_t> vertices_per_graph(graph_count, 0);
  graph_of.reserve(indicator_file.lines.size());
  local_of.reserve(indicator_file.lines.size());
  for (std::size_t i = 0; i < indicator_file.lines.size(); ++i) {
    const auto id = parse_int(indicator_file.lines[i], indicator_file.file, i + 1);
    if (id < 1 || static_cast<std::size_t>(id) > graph_count) {
      throw ParseError(indicator_file.file, i + 1,
                       "vertex references unknown graph id " + std::to_string(id));
    }
    const auto g = static_cast<std::size_t>(id - 1);
    graph_of.push_back(g);
    local_of.push_back(static_cast<Vertex>(vertices_per_graph[g]++));
  }

  // direction mask per unordered global pair: bit 0 for (lo, hi), bit 1 for (hi, lo)
  std::map<std::pair<std::size_t, std::size_t>, unsigned> seen;
  for (std::size_t i = 0; i < edge_file.lines.size(); ++i) {
    const std::string_view line = edge_file.lines[i];
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw ParseError(edge_file.file, i + 1, "expected 'i, j'");
    }
    const auto a = parse_int(line.substr(0, comma), edge_file.file, i + 1);
    const auto b = parse_int(line.substr(comma + 1), edge_file.file, i + 1);
    for (auto v : {a, b}) {
      if (v < 1 || static_cast<std::size_t>(v) > graph_of.size()) {
        throw ParseError(edge_file.file, i + 1, "unknown vertex id " + std::to_string(v));
      }
    }
    const auto ga = static_cast<std::size_t>(a - 1);
    const auto gb = static_cast<std::size_t>(b - 1);
    if (ga == gb) throw ParseError(edge_file.file, i + 1, "self-loop on vertex " + std::to_string(a));
    if (graph_of[ga] != graph_of[gb]) {
      throw ParseError(edge_file.file, i + 1, "edge crosses graphs " +
                                                  std::to_string(graph_of[ga] + 1) + " and " +
                                                  std::to_string(graph_of[gb] + 1));
    }
    seen[{std::min(ga, gb), std::max(ga, gb)}] |= ga < gb ? 1u : 2u;
  }

  std::vector<std::vector<Edge>> edges(graph_count);
  std::size_t one_way = 0;
  for (const auto& [pair, mask] : seen) {
    if (mask != 3u) ++one_way;
    edges[graph_of[pair.first]].push_back(make_edge(local_of[pair.first], local_of[pair.second]));
  }
  if (diagnostics != nullptr) {
    diagnostics->one_way_edges = one_way;
    diagnostics->edge_lines = edge_file.lines.size();
  }

  GraphDataset ds;
  ds.name = name;
  ds.label_vocab = raw_labels;
  std::sort(ds.label_vocab.begin(), ds.label_vocab.end());
  ds.label_vocab.erase(std::unique(ds.label_vocab.begin(), ds.label_vocab.end()),
                       ds.label_vocab.end());
  ds.graphs.reserve(graph_count);
  ds.labels.reserve(graph_count);
  for (std::size_t g = 0; g < graph_count; ++g) {
    ds.graphs.emplace_back(vertices_per_graph[g], edges[g]);
    const auto it = std::lower_bound(ds.label_vocab.begin(), ds.label_vocab.end(), raw_labels[g]);
    ds.labels.push_back(static_cast<ClassLabel>(it - ds.label_vocab.begin()));
  }
  if (ds.label_vocab.size() < 2) {
    throw ParseError(label_file.file, 1, "dataset needs at least two distinct labels");
  }
  return ds;
}

void write_tu_dataset(const GraphDataset& ds, const std::filesystem::path& directory,
                      const std::string& name) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  auto open = [&](const std::string& suffix) {
    const auto path = directory / (name + suffix);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
  };
  auto edge_out = open("_A.txt");
  auto indicator_out = open("_graph_indicator.txt");
  auto label_out = open("_graph_labels.txt");

  std::size_t offset = 1;
  for (std::size_t g = 0; g < ds.graphs.size(); ++g) {
    const Graph& graph = ds.graphs[g];
    for (Vertex v = 0; v < graph.vertex_count(); ++v) {
      indicator_out << g + 1 << '\n';
      for (Vertex w : graph.neighbors(v)) {
        edge_out << offset + v << ", " << offset + w << '\n';
      }
    }
    offset += graph.vertex_count();
    label_out << ds.label_vocab.at(static_cast<std::size_t>(ds.labels[g])) << '\n';
  }
  for (auto* out : {&edge_out, &indicator_out, &label_out}) {
    out->flush();
    if (!*out) throw IoError("write failed in " + directory.string());
  }
}

DatasetStats dataset_stats(const GraphDataset& ds) {
  DatasetStats stats;
  stats.graph_count = ds.size();
  stats.class_count = ds.class_count();
  if (ds.graphs.empty()) return stats;
  std::size_t vertices = 0;
  std::size_t edges = 0;
  for (const Graph& g : ds.graphs) {
    vertices += g.vertex_count();
    edges += g.edge_count();
  }
  std::vector<std::size_t> per_class(ds.class_count(), 0);
  for (ClassLabel y : ds.labels) ++per_class.at(static_cast<std::size_t>(y));
  const auto n = static_cast<double>(ds.size());
  stats.mean_vertices = static_cast<double>(vertices) / n;
  stats.mean_edges = static_cast<double>(edges) / n;
  stats.bias = static_cast<double>(*std::max_element(per_class.begin(), per_class.end())) / n;
  return stats;
}

// ---------------------------------------------------------------------------
// Apportionment

std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& ratios) {
  if (ratios.empty()) throw InputError("apportion needs at least one part");
  double sum = 0.0;
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InputError("split ratios must be positive");
    sum += r;
  }
  const std::size_t parts = ratios.size();
  std::vector<std::size_t> counts(parts);
  std::vector<double> remainder(parts);
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const double quota = static_cast<double>(total) * ratios[p] / sum;
    // guard against quotas like 20 * 0.7 = 13.999999999999998
    const double floored = std::floor(quota + 1e-9);
    counts[p] = static_cast<std::size_t>(floored);
    remainder[p] = std::max(0.0, quota - floored);
    assigned += counts[p];
  }
  std::vector<std::size_t> order(parts);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b] + 1e-12; });
  for (std::size_t i = 0; assigned < total; i = (i + 1) % parts, ++assigned) ++counts[order[i]];

  if (total >= parts) {
    for (std::size_t p = 0; p < parts; ++p) {
      if (counts[p] != 0) continue;
      const auto donor = static_cast<std::size_t>(
          std::max_element(counts.begin(), counts.end()) - counts.begin());
      --counts[donor];
      ++counts[p];
    }
  }
  return counts;
}

namespace {

// Small residual-graph max flow; nodes: source, classes, parts, sink.
class FlowNetwork {
 public:
  explicit FlowNetwork(std::size_t nodes) : cap_(nodes, std::vector<long>(nodes, 0)) {}

  void add(std::size_t from, std::size_t to, long capacity) { cap_[from][to] += capacity; }
  long residual(std::size_t from, std::size_t to) const { return cap_[from][to]; }

  bool push_path(std::size_t source, std::size_t sink) {
    const std::size_t n = cap_.size();
    std::vector<std::size_t> prev(n, n);
    std::vector<std::size_t> queue{source};
    prev[source] = source;
    for (std::size_t head = 0; head < queue.size() && prev[sink] == n; ++head) {
      const std::size_t at = queue[head];
      for (std::size_t to = 0; to < n; ++to) {
        if (prev[to] == n && cap_[at][to] > 0) {
          prev[to] = at;
          queue.push_back(to);
        }
      }
    }
    if (prev[sink] == n) return false;
    for (std::size_t at = sink; at != source; at = prev[at]) {
      --cap_[prev[at]][at];
      ++cap_[at][prev[at]];
    }
    return true;
  }

  void push_edge(std::size_t from, std::size_t to) {
    --cap_[from][to];
    ++cap_[to][from];
  }

 private:
  std::vector<std::vector<long>> cap_;
};

}  // namespace

std::vector<std::vector<std::size_t>> apportion_by_class(
    const std::vector<std::size_t>& class_sizes, const std::vector<double>& ratios) {
  const std::size_t total = std::accumulate(class_sizes.begin(), class_sizes.end(), std::size_t{0});
  const auto targets = apportion(total, ratios);
  const double ratio_sum = std::accumulate(ratios.begin(), ratios.end(), 0.0);
  const std::size_t classes = class_sizes.size();
  const std::size_t parts = ratios.size();

  std::vector<std::vector<std::size_t>> cells(classes, std::vector<std::size_t>(parts, 0));
  std::vector<std::vector<double>> fraction(classes, std::vector<double>(parts, 0.0));
  std::vector<long> class_left(classes, 0);
  std::vector<long> part_left(parts, 0);
  for (std::size_t p = 0; p < parts; ++p) part_left[p] = static_cast<long>(targets[p]);
  for (std::size_t c = 0; c < classes; ++c) {
    long left = static_cast<long>(class_sizes[c]);
    for (std::size_t p = 0; p < parts; ++p) {
      const double quota = static_cast<double>(class_sizes[c]) * ratios[p] / ratio_sum;
      const double floored = std::floor(quota + 1e-9);
      cells[c][p] = static_cast<std::size_t>(floored);
      fraction[c][p] = std::max(0.0, quota - floored);
      left -= static_cast<long>(cells[c][p]);
      part_left[p] -= static_cast<long>(cells[c][p]);
    }
    class_left[c] = left;
  }
  // Only reachable on tiny inputs where a starved part borrowed from a donor
  // whose floors already filled it: release donor floors from the largest classes.
  for (std::size_t p = 0; p < parts; ++p) {
    while (part_left[p] < 0) {
      std::size_t pick = classes;
      for (std::size_t c = 0; c < classes; ++c) {
        if (cells[c][p] > 0 && (pick == classes || class_sizes[c] > class_sizes[pick])) pick = c;
      }
      --cells[pick][p];
      ++class_left[pick];
      ++part_left[p];
      fraction[pick][p] += 1.0;
    }
  }

  const std::size_t source = 0;
  const std::size_t sink = 1 + classes + parts;
  FlowNetwork net(sink + 1);
  for (std::size_t c = 0; c < classes; ++c) {
    net.add(source, 1 + c, class_left[c]);
    for (std::size_t p = 0; p < parts; ++p) {
      net.add(1 + c, 1 + classes + p, fraction[c][p] > 1.0 ? 2 : 1);
    }
  }
  for (std::size_t p = 0; p < parts; ++p) net.add(1 + classes + p, sink, part_left[p]);

  // greedy pass in largest-remainder order, ties to the lower class then part
  std::vector<std::pair<std::size_t, std::size_t>> order;
  for (std::size_t c = 0; c < classes; ++c)
    for (std::size_t p = 0; p < parts; ++p) order.emplace_back(c, p);
  std::stable_sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    return fraction[a.first][a.second] > fraction[b.first][b.second] + 1e-12;
  });
  long flow = 0;
  for (const auto& [c, p] : order) {
    const std::size_t cn = 1 + c;
    const std::size_t pn = 1 + classes + p;
    while (net.residual(source, cn) > 0 && net.residual(cn, pn) > 0 && net.residual(pn, sink) > 0) {
      net.push_edge(source, cn);
      net.push_edge(cn, pn);
      net.push_edge(pn, sink);
      ++flow;
    }
  }
  const long needed = std::accumulate(class_left.begin(), class_left.end(), 0L);
  while (flow < needed && net.push_path(source, sink)) ++flow;
  if (flow != needed) throw std::logic_error("stratified apportionment is infeasible");

  for (std::size_t c = 0; c < classes; ++c) {
    for (std::size_t p = 0; p < parts; ++p) {
      // pushed units show up as reverse capacity on the class -> part arc
      cells[c][p] += static_cast<std::size_t>(net.residual(1 + classes + p, 1 + c));
    }
  }
  return cells;
}

// ---------------------------------------------------------------------------
// Splits

namespace {

std::vector<std::vector<std::size_t>> members_by_class(const GraphDataset& ds,
                                                       const std::vector<std::size_t>& indices) {
  std::vector<std::vector<std::size_t>> members(ds.class_count());
  for (std::size_t i : indices) members.at(static_cast<std::size_t>(ds.labels.at(i))).push_back(i);
  return members;
}

/// Shuffles each class and deals its members into parts by the apportioned counts.
std::vector<std::vector<std::size_t>> deal(std::vector<std::vector<std::size_t>> members,
                                           const std::vector<double>& ratios, Rng& rng) {
  std::vector<std::size_t> sizes;
  for (const auto& m : members) sizes.push_back(m.size());
  const auto cells = apportion_by_class(sizes, ratios);
  std::vector<std::vector<std::size_t>> parts(ratios.size());
  for (std::size_t c = 0; c < members.size(); ++c) {
    rng.shuffle(std::span(members[c]));
    std::size_t at = 0;
    for (std::size_t p = 0; p < ratios.size(); ++p) {
      for (std::size_t k = 0; k < cells[c][p]; ++k) parts[p].push_back(members[c][at++]);
    }
  }
  for (auto& part : parts) std::sort(part.begin(), part.end());
  return parts;
}

std::vector<std::size_t> all_indices(const GraphDataset& ds) {
  std::vector<std::size_t> idx(ds.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

Split stratified_split(const GraphDataset& ds, const SplitRatios& ratios, std::uint64_t seed) {
  const std::vector<double> r{ratios.train, ratios.val, ratios.test};
  for (double x : r) {
    if (!(x > 0.0)) throw InputError("split ratios must be positive");
  }
  if (std::abs(r[0] + r[1] + r[2] - 1.0) > 1e-9) {
    throw InputError("split ratios must sum to 1");
  }
  if (ds.size() < 3) {
    throw SplitError("dataset '" + ds.name + "' has fewer than 3 graphs; cannot split");
  }
  Rng rng(seed);
  auto parts = deal(members_by_class(ds, all_indices(ds)), r, rng);
  for (const auto& part : parts) {
    if (part.empty()) throw SplitError("split would leave a part empty");
  }
  return Split{std::move(parts[0]), std::move(parts[1]), std::move(parts[2])};
}

std::vector<Split> kfold(const GraphDataset& ds, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw InputError("kfold needs k >= 2");
  auto members = members_by_class(ds, all_indices(ds));
  for (std::size_t c = 0; c < members.size(); ++c) {
    if (members[c].size() < k) {
      throw SplitError("class " + std::to_string(c) + " has " + std::to_string(members[c].size()) +
                       " members, fewer than k = " + std::to_string(k));
    }
  }

  Rng rng(seed);
  std::vector<std::size_t> fold_of(ds.size(), 0);
  std::size_t offset = 0;
  for (auto& m : members) {
    rng.shuffle(std::span(m));
    for (std::size_t pos = 0; pos < m.size(); ++pos) fold_of[m[pos]] = (offset + pos) % k;
    offset += m.size();
  }

  const std::vector<double> train_val{7.0, 1.0};
  std::vector<Split> splits;
  splits.reserve(k);
  for (std::size_t f = 0; f < k; ++f) {
    Split split;
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < ds.size(); ++i) {
      (fold_of[i] == f ? split.test : rest).push_back(i);
    }
    Rng inner(derive_seed(seed, f + 1));
    auto parts = deal(members_by_class(ds, rest), train_val, inner);
    split.train = std::move(parts[0]);
    split.val = std::move(parts[1]);
    if (split.train.empty() || split.val.empty()) {
      throw SplitError("fold " + std::to_string(f) + " leaves no room for train and validation");
    }
    splits.push_back(std::move(split));
  }
  return splits;
}

}  // namespace mevolve
