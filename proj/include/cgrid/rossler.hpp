#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cgrid/hsets.hpp"
#include "cgrid/poly_field.hpp"

namespace cgrid {

/// x' = -y - z, y' = x + 0.2 y, z' = x z - a z + 0.2 with a given as a
/// decimal literal.
PolyField rossler_field(const std::string& a);

/// Printed enclosures of a periodic orbit on the section, in orbit order.
struct OrbitBoxes {
  std::string a;
  int period = 0;
  std::vector<std::array<std::string, 4>> text;  ///< y_lo, y_hi, z_lo, z_hi
  std::vector<Box> boxes;  ///< outer enclosures of the printed rectangles
  std::vector<Box> inner;  ///< largest double boxes inside them
  std::string note;

  void rebuild();  ///< recompute boxes from text
};

struct CaseStudy {
  std::string key;  ///< "5.25", "4.7", "4.381", "5.42"
  std::string a;
  int period = 0;
  ContractingGridSpec grid;
  std::optional<OrbitBoxes> orbit;
  std::vector<int> expected_periods_upto20;  ///< periods the verified grid must force, m ≤ 20
  bool expected_exact = true;                ///< false when only a lower bound is stated
  std::vector<PVector> orbit_guess;          ///< rough orbit points for locate-orbit
};

/// Built-in datasets.
/// @throws std::invalid_argument for an unknown key.
CaseStudy builtin_case(const std::string& key);
std::vector<std::string> builtin_keys();

// JSON forms (decimal strings throughout).
std::string grid_to_json(const ContractingGridSpec& g, const std::string& a = "");
ContractingGridSpec grid_from_json(const std::string& text, std::string* a = nullptr);
std::string orbit_to_json(const OrbitBoxes& o);
OrbitBoxes orbit_from_json(const std::string& text);

std::string read_file(const std::string& path);

}  // namespace cgrid
