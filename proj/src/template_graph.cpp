#include "dwb/template_graph.hpp"

#include <cmath>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "dwb/error.hpp"

namespace dwb::geometry {

namespace {

using ordered_json = nlohmann::ordered_json;

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

ordered_json point_json(Point p) { return ordered_json::array({p.x, p.y}); }

Point point_from(const nlohmann::json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::InvalidTemplate, std::string(what) + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Goal: return "goal";
    case NodeKind::Solution: return "solution";
    case NodeKind::Condition: return "condition";
  }
  return "goal";
}

NodeKind parse_node_kind(std::string_view s) {
  if (s == "goal") return NodeKind::Goal;
  if (s == "solution") return NodeKind::Solution;
  if (s == "condition") return NodeKind::Condition;
  throw Error(ErrorCode::InvalidTemplate, "unknown node kind '" + std::string(s) + "'");
}

const TemplateNode* TemplateGraph::find_node(std::string_view id) const {
  for (const auto& n : nodes_) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

void TemplateGraph::add_node(TemplateNode node) {
  if (node.id.empty()) throw Error(ErrorCode::InvalidTemplate, "node id is empty");
  if (find_node(node.id)) throw Error(ErrorCode::InvalidTemplate, "duplicate node id '" + node.id + "'");
  if (!finite(node.position)) throw Error(ErrorCode::InvalidTemplate, "node position is not finite");
  nodes_.push_back(std::move(node));
}

std::size_t TemplateGraph::add_relation(RelationLine relation) {
  if (!find_node(relation.from) || !find_node(relation.to)) {
    throw Error(ErrorCode::InvalidTemplate, "relation endpoint does not exist");
  }
  if (relation.from == relation.to) throw Error(ErrorCode::InvalidTemplate, "self-loop relation");
  if (!std::isfinite(relation.support)) throw Error(ErrorCode::InvalidTemplate, "support is not finite");
  if (!finite(relation.anchor1) || !finite(relation.anchor2)) {
    throw Error(ErrorCode::InvalidTemplate, "anchor is not finite");
  }
  relations_.push_back(std::move(relation));
  return relations_.size() - 1;
}

void TemplateGraph::move_node(std::string_view id, Point position) {
  if (!finite(position)) throw Error(ErrorCode::InvalidTemplate, "node position is not finite");
  for (auto& n : nodes_) {
    if (n.id == id) {
      n.position = position;
      return;
    }
  }
  throw Error(ErrorCode::NotFound, "no node '" + std::string(id) + "'");
}

void TemplateGraph::set_curved(std::size_t relation, bool curved) {
  auto& r = relations_.at(relation);
  if (curved && !r.curved) {
    const auto chord = CubicBezier::line(find_node(r.from)->position, find_node(r.to)->position);
    r.anchor1 = chord.p1;
    r.anchor2 = chord.p2;
  }
  r.curved = curved;
}

void TemplateGraph::move_anchor(std::size_t relation, int which, Point position) {
  auto& r = relations_.at(relation);
  if (!r.curved) throw Error(ErrorCode::InvalidTemplate, "straight relation lines have no anchors");
  if (!finite(position)) throw Error(ErrorCode::InvalidTemplate, "anchor is not finite");
  if (which == 1) {
    r.anchor1 = position;
  } else if (which == 2) {
    r.anchor2 = position;
  } else {
    throw Error(ErrorCode::InvalidArgument, "anchor must be 1 or 2");
  }
}

CubicBezier TemplateGraph::curve_of(std::size_t relation) const {
  const auto& r = relations_.at(relation);
  const Point from = find_node(r.from)->position;
  const Point to = find_node(r.to)->position;
  if (!r.curved) return CubicBezier::line(from, to);
  return {from, r.anchor1, r.anchor2, to};
}

std::optional<std::size_t> TemplateGraph::hit_relation(Point point, double threshold,
                                                       double tolerance) const {
  std::optional<std::size_t> best;
  double best_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    const auto hit = hit_test(curve_of(i), point, threshold, tolerance);
    if (hit.hit && hit.distance < best_distance) {
      best = i;
      best_distance = hit.distance;
    }
  }
  return best;
}

void TemplateGraph::validate() const {
  TemplateGraph copy;
  for (const auto& n : nodes_) copy.add_node(n);
  for (const auto& r : relations_) copy.add_relation(r);
}

std::string to_json_text(const TemplateGraph& graph) {
  ordered_json doc;
  doc["nodes"] = ordered_json::array();
  for (const auto& n : graph.nodes()) {
    ordered_json node;
    node["id"] = n.id;
    node["kind"] = std::string(to_string(n.kind));
    node["label"] = n.label;
    node["position"] = point_json(n.position);
    doc["nodes"].push_back(std::move(node));
  }
  doc["relations"] = ordered_json::array();
  for (const auto& r : graph.relations()) {
    ordered_json rel;
    rel["from"] = r.from;
    rel["to"] = r.to;
    rel["support"] = r.support;
    rel["curved"] = r.curved;
    rel["anchors"] = ordered_json::array({point_json(r.anchor1), point_json(r.anchor2)});
    rel["style"] = r.style;
    doc["relations"].push_back(std::move(rel));
  }
  return doc.dump(2) + "\n";
}

TemplateGraph from_json_text(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("template is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("nodes") || !doc["nodes"].is_array()) {
    throw Error(ErrorCode::InvalidTemplate, "template needs a 'nodes' array");
  }
  TemplateGraph graph;
  try {
    for (const auto& n : doc["nodes"]) {
      TemplateNode node;
      node.id = n.at("id").get<std::string>();
      node.kind = parse_node_kind(n.at("kind").get<std::string>());
      node.label = n.value("label", "");
      node.position = point_from(n.at("position"), "position");
      graph.add_node(std::move(node));
    }
    if (doc.contains("relations")) {
      for (const auto& r : doc["relations"]) {
        RelationLine rel;
        rel.from = r.at("from").get<std::string>();
        rel.to = r.at("to").get<std::string>();
        rel.support = r.value("support", 0.0);
        rel.curved = r.value("curved", false);
        rel.style = r.value("style", "");
        if (r.contains("anchors")) {
          const auto& anchors = r["anchors"];
          if (!anchors.is_array() || anchors.size() != 2) {
            throw Error(ErrorCode::InvalidTemplate, "anchors must hold two points");
          }
          rel.anchor1 = point_from(anchors[0], "anchor");
          rel.anchor2 = point_from(anchors[1], "anchor");
        } else {
          const auto chord = CubicBezier::line(graph.find_node(rel.from) ? graph.find_node(rel.from)->position : Point{},
                                               graph.find_node(rel.to) ? graph.find_node(rel.to)->position : Point{});
          rel.anchor1 = chord.p1;
          rel.anchor2 = chord.p2;
        }
        graph.add_relation(std::move(rel));
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidTemplate, std::string("malformed template: ") + e.what());
  }
  return graph;
}

}  // namespace dwb::geometry
