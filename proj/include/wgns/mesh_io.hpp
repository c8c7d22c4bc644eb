#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "wgns/mesh.hpp"

namespace wgns {

// On-disk format, 0-based indices:
//   {"version": 1, "vertices": [[x,y], ...], "cells": [[i0,i1,...], ...]}
// Doubles round-trip exactly (shortest-representation serialization), so
// save/load reproduces vertex coordinates bit for bit.

inline PolygonalMesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("mesh: cannot open '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("mesh: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("version") || !j["version"].is_number_integer() ||
      j["version"].get<int>() != 1)
    throw std::runtime_error("mesh: '" + path + "' must be an object with \"version\": 1");
  if (!j.contains("vertices") || !j["vertices"].is_array() || !j.contains("cells") ||
      !j["cells"].is_array())
    throw std::runtime_error("mesh: '" + path + "' needs \"vertices\" and \"cells\" arrays");

  std::vector<Vec2> verts;
  verts.reserve(j["vertices"].size());
  for (const auto& v : j["vertices"]) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      throw std::runtime_error("mesh: vertex " + std::to_string(verts.size()) +
                               " is not a pair of numbers");
    verts.emplace_back(v[0].get<double>(), v[1].get<double>());
  }
  std::vector<std::vector<int>> cells;
  cells.reserve(j["cells"].size());
  for (const auto& c : j["cells"]) {
    if (!c.is_array())
      throw std::runtime_error("mesh: cell " + std::to_string(cells.size()) + " is not an array");
    std::vector<int> loop;
    loop.reserve(c.size());
    for (const auto& idx : c) {
      if (!idx.is_number_integer())
        throw std::runtime_error("mesh: cell " + std::to_string(cells.size()) +
                                 " has a non-integer vertex index");
      loop.push_back(idx.get<int>());
    }
    cells.push_back(std::move(loop));
  }
  return build_mesh(std::move(verts), std::move(cells));
}

inline PolygonalMesh generate_mesh(const MeshFamily& family, int level) {
  switch (family.kind) {
    case MeshFamilyKind::Triangular: return generate_triangular(level, family.rect);
    case MeshFamilyKind::Hexagonal: return generate_hexagonal(level, family.rect);
    case MeshFamilyKind::NonConvex: return generate_nonconvex(level, family.rect);
    case MeshFamilyKind::File:
      if (level != 0) detail::fail_mesh("file-backed families have a single level");
      return load_mesh(family.path);
  }
  detail::fail_mesh("unsupported mesh family");
  return {};  // unreachable
}

inline void save_mesh(const PolygonalMesh& mesh, const std::string& path) {
  nlohmann::json j;
  j["version"] = 1;
  auto& jv = j["vertices"] = nlohmann::json::array();
  for (const auto& v : mesh.vertices) jv.push_back({v.x(), v.y()});
  j["cells"] = mesh.cells;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("mesh: cannot write '" + path + "'");
  out << j.dump(1) << '\n';
}

}  // namespace wgns
