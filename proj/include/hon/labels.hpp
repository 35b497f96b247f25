#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hon/error.hpp"

namespace hon {

/// Dense node index, contiguous from 0 within one label table.
using NodeId = std::uint32_t;

/// Bijection between opaque node labels and dense indices.
class LabelTable {
public:
  NodeId intern(std::string_view label) {
    if (label.empty())
      throw ValidationError("empty node label");
    auto it = index_.find(std::string(label));
    if (it != index_.end())
      return it->second;
    const auto id = static_cast<NodeId>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
  }

  std::optional<NodeId> find(std::string_view label) const {
    auto it = index_.find(std::string(label));
    if (it == index_.end())
      return std::nullopt;
    return it->second;
  }

  NodeId at(std::string_view label) const {
    if (auto id = find(label))
      return *id;
    throw ValidationError("unknown node label '" + std::string(label) + "'");
  }

  const std::string& label(NodeId id) const { return labels_.at(id); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

  friend bool operator==(const LabelTable& a, const LabelTable& b) {
    return a.labels_ == b.labels_;
  }

private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, NodeId> index_;
};

/// Joins the labels of a node tuple with `sep`, e.g. "a|b|c".
inline std::string join_labels(const LabelTable& table,
                               const std::vector<NodeId>& nodes,
                               char sep = '|') {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i)
      out.push_back(sep);
    out += table.label(nodes[i]);
  }
  return out;
}

} // namespace hon
