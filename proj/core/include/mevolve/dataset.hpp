#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mevolve/graph.hpp"

namespace mevolve {

using ClassLabel = std::int32_t;

/// Labelled graph collection. labels[i] is a dense class index into label_vocab,
/// which holds the raw file label of each class in ascending order.
struct GraphDataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<ClassLabel> labels;
  std::vector<std::int64_t> label_vocab;

  std::size_t size() const noexcept { return graphs.size(); }
  std::size_t class_count() const noexcept { return label_vocab.size(); }

  /// Throws InputError if sizes disagree, a label is out of range, fewer than
  /// two classes exist or the dataset is empty.
  void validate() const;
};

struct LoadDiagnostics {
  /// Edge lines whose reverse direction never appears in the file.
  std::size_t one_way_edges = 0;
  std::size_t edge_lines = 0;
};

/// Reads <name>_A.txt, <name>_graph_indicator.txt and <name>_graph_labels.txt from
/// directory. Global 1-based vertex ids are remapped to dense per-graph ids in
/// file order. Optional label/attribute files are ignored.
GraphDataset load_tu_dataset(const std::filesystem::path& directory, const std::string& name,
                             LoadDiagnostics* diagnostics = nullptr);

/// Writes ds in the same layout, both edge directions listed. Labels are written
/// back as their raw values.
void write_tu_dataset(const GraphDataset& ds, const std::filesystem::path& directory,
                      const std::string& name);

struct DatasetStats {
  std::size_t graph_count = 0;
  std::size_t class_count = 0;
  double mean_vertices = 0.0;
  double mean_edges = 0.0;
  /// Share of the dominant class, in [0, 1].
  double bias = 0.0;
};

DatasetStats dataset_stats(const GraphDataset& ds);

/// Disjoint index lists into a dataset, each sorted ascending.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  friend bool operator==(const Split&, const Split&) = default;
};

struct SplitRatios {
  double train = 0.7;
  double val = 0.1;
  double test = 0.2;
};

/// Apportions `total` items over parts with the given positive ratios by largest
/// remainder (ties to the lower part). Parts left at zero borrow one item from the
/// largest part while total allows it.
std::vector<std::size_t> apportion(std::size_t total, const std::vector<double>& ratios);

/// Stratified apportionment: cell (c, p) is floor or ceil of class_sizes[c] * ratio[p],
/// column sums equal apportion(sum(class_sizes), ratios).
std::vector<std::vector<std::size_t>> apportion_by_class(
    const std::vector<std::size_t>& class_sizes, const std::vector<double>& ratios);

/// Stratified train/val/test split. Throws InputError for invalid ratios and
/// SplitError if any part would be empty.
Split stratified_split(const GraphDataset& ds, const SplitRatios& ratios, std::uint64_t seed);

/// k stratified folds. Fold f is the test part of split f; the remaining indices
/// are split train:val = 7:1, stratified. Throws SplitError if a class has fewer
/// than k members.
std::vector<Split> kfold(const GraphDataset& ds, std::size_t k, std::uint64_t seed);

}  // namespace mevolve
