#pragma once

// Decision templates: goal/solution/condition nodes joined by weighted
// relation lines whose geometry is a cubic Bezier.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dwb/bezier.hpp"

namespace dwb::geometry {

enum class NodeKind { Goal, Solution, Condition };

std::string_view to_string(NodeKind kind);
NodeKind parse_node_kind(std::string_view s);

struct TemplateNode {
  std::string id;
  NodeKind kind = NodeKind::Goal;
  std::string label;
  Point position;
};

struct RelationLine {
  std::string from;
  std::string to;
  double support = 0.0;
  bool curved = false;
  Point anchor1;  // P1, meaningful when curved
  Point anchor2;  // P2
  std::string style;  // reserved, uninterpreted
};

class TemplateGraph {
 public:
  const std::vector<TemplateNode>& nodes() const { return nodes_; }
  const std::vector<RelationLine>& relations() const { return relations_; }

  const TemplateNode* find_node(std::string_view id) const;

  void add_node(TemplateNode node);
  /// Appends a relation and returns its position.
  std::size_t add_relation(RelationLine relation);

  void move_node(std::string_view id, Point position);

  /// Turning a straight line curved places the anchors on the chord at 1/3
  /// and 2/3, so the curve starts out coinciding with the line.
  void set_curved(std::size_t relation, bool curved);
  /// `which` is 1 or 2.
  void move_anchor(std::size_t relation, int which, Point position);

  CubicBezier curve_of(std::size_t relation) const;

  /// Closest relation within `threshold`, if any.
  std::optional<std::size_t> hit_relation(Point point, double threshold,
                                          double tolerance = kDefaultFlattenTolerance) const;

  /// Checks unique node ids, existing endpoints, no self-loops, finite numbers.
  void validate() const;

 private:
  std::vector<TemplateNode> nodes_;
  std::vector<RelationLine> relations_;
};

/// JSON document with a fixed field order; doubles use shortest round-trip
/// text so coordinates survive save/load exactly.
std::string to_json_text(const TemplateGraph& graph);
TemplateGraph from_json_text(std::string_view text);

}  // namespace dwb::geometry
