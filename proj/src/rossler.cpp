#include "cgrid/rossler.hpp"

#include <fstream>
#include <sstream>

#include "cgrid/decimal.hpp"
#include "json.hpp"

namespace cgrid {

using nlohmann::json;

PolyField rossler_field(const std::string& a) {
  const Interval av = parse_decimal(a);
  if (!(av.lo() > 0)) throw std::invalid_argument("Rossler parameter a must be positive");
  const std::string neg_a = a.front() == '-' ? a.substr(1) : "-" + a;
  return PolyField(3, {
                          {Monomial("-1", {0, 1, 0}), Monomial("-1", {0, 0, 1})},
                          {Monomial("1", {1, 0, 0}), Monomial("0.2", {0, 1, 0})},
                          {Monomial("1", {1, 0, 1}), Monomial(neg_a, {0, 0, 1}), Monomial("0.2", {0, 0, 0})},
                      });
}

void OrbitBoxes::rebuild() {
  boxes.clear();
  inner.clear();
  for (const auto& t : text) {
    const Interval ylo = parse_decimal(t[0]), yhi = parse_decimal(t[1]);
    const Interval zlo = parse_decimal(t[2]), zhi = parse_decimal(t[3]);
    if (!(ylo.lo() <= yhi.hi()) || !(zlo.lo() <= zhi.hi())) throw std::invalid_argument("orbit box with lo > hi");
    // outer enclosure of the printed rectangle
    boxes.push_back(Box{Interval(ylo.lo(), yhi.hi()), Interval(zlo.lo(), zhi.hi())});
    inner.push_back(Box{Interval(ylo.hi(), yhi.lo()), Interval(zlo.hi(), zhi.lo())});
  }
  if (period == 0) period = static_cast<int>(boxes.size());
  if (period != static_cast<int>(boxes.size())) throw std::invalid_argument("orbit period does not match the number of boxes");
}

namespace {

AffineHSet hset(std::string cy, std::string cz, std::string m00, std::string m01, std::string m10, std::string m11, std::string r1,
                std::string r2) {
  return AffineHSet::from_text({cy, cz}, {m00, m01, m10, m11}, {r1, r2});
}

ContractingGridSpec cyclic_grid(std::string name, AffineHSet outer, std::vector<AffineHSet> cubes) {
  ContractingGridSpec g;
  g.name = std::move(name);
  g.outer = std::move(outer);
  g.cubes = std::move(cubes);
  const std::size_t n = g.cubes.size();
  for (std::size_t i = 0; i < n; ++i) g.next.push_back((i + 1) % n);
  g.clip.assign(n, true);
  return g;
}

std::vector<int> range_periods(int lo, int hi, bool (*keep)(int)) {
  std::vector<int> v;
  for (int m = lo; m <= hi; ++m)
    if (keep(m)) v.push_back(m);
  return v;
}

std::vector<PVector> centers_of(const ContractingGridSpec& g) {
  std::vector<PVector> v;
  for (const auto& c : g.cubes) v.push_back(c.center.mid());
  return v;
}

CaseStudy case_525() {
  CaseStudy c;
  c.key = "5.25";
  c.a = "5.25";
  c.period = 3;
  const std::string m01 = "0.000656767", m10 = "-0.000656767";
  c.grid = cyclic_grid("G3", hset("-6.38401", "0.0327544", "-1.", m01, m10, "-1.", "3.63687", "0.0004"),
                       {
                           hset("-3.46642", "0.0346316", "-1.", m01, m10, "-1.", "0.072", "0.00048"),
                           hset("-6.26401", "0.0326544", "-1.", m01, m10, "-1.", "0.162", "0.00066"),
                           hset("-9.74889", "0.0307529", "-1.", m01, m10, "-1.", "0.036", "0.00072"),
                       });
  c.grid.note = "grid around the attracting 3-periodic orbit; all numbers as printed";
  c.expected_periods_upto20 = range_periods(1, 20, [](int) { return true; });
  c.orbit_guess = centers_of(c.grid);
  return c;
}

CaseStudy case_47() {
  CaseStudy c;
  c.key = "4.7";
  c.a = "4.7";
  c.period = 5;
  c.grid = cyclic_grid("G5", hset("-6.1885", "0.0356707", "-1.", "0.000778356", "-0.000778356", "-1.", "2.68797", "0.0004"),
                       {
                           hset("-3.86108", "0.0375827", "0.0693366", "1.", "-0.997593", "0.000984231", "0.0006", "0.00138"),
                           hset("-6.82009", "0.0350822", "0.7879108", "1.", "0.615789", "0.0007307", "0.0012", "0.0024"),
                           hset("-7.83056", "0.0343732", "0.8138516", "1.", "0.581073", "0.000671", "0.0012", "0.0042"),
                           hset("-5.75153", "0.0359038", "0.9997319", "1.", "-0.023153", "0.0008062", "0.0228", "0.01116"),
                           hset("-8.73615", "0.0337875", "0.8997843", "1.", "0.436335", "0.00062508", "0.00144", "0.000744"),
                       });
  c.grid.note = "grid around the attracting 5-periodic orbit; all numbers as printed";
  c.expected_periods_upto20 = range_periods(1, 20, [](int m) { return m != 3; });
  c.expected_exact = false;
  c.orbit_guess = centers_of(c.grid);
  return c;
}

CaseStudy case_4381() {
  CaseStudy c;
  c.key = "4.381";
  c.a = "4.381";
  c.period = 6;
  // The outer chart is printed with off-diagonal signs [-1, -s; s, -1]. Read
  // that way the orbit sits outside G in the transverse coordinate by more than
  // ten radii, so the rotation sense used for G3 and G5 is restored here.
  c.grid = cyclic_grid("G6", hset("-5.99932", "0.0376868", "-1.", "0.000899679", "-0.000899679", "-1.", "2.24683", "0.00022"),
                       {
                           hset("-7.44827", "0.0363852", "1.", "0.8498", "0.0007825", "0.527106", "0.00225", "0.0005"),
                           hset("-5.43268", "0.038121", "1.23042", "0.696746", "-0.00567154", "-0.0240555", "0.00509", "0.015"),
                           hset("-8.14614", "0.0358553", "1.", "0.907289", "0.000736978", "0.420507", "0.000265", "0.00085"),
                           hset("-4.05249", "0.0395383", "0.999999", "0.155044", "0.00111181", "-0.987908", "0.000485", "0.00035"),
                           hset("-6.98865", "0.0367524", "1.", "0.827066", "0.000815525", "0.562105", "0.000712", "0.0005"),
                           hset("-6.38538", "0.0372585", "1.", "0.834783", "0.000863145", "0.550579", "0.00149", "0.0006"),
                       });
  c.grid.note = "outer chart off-diagonal signs swapped relative to the printed [-1, -0.000899679; 0.000899679, -1]; all other numbers as printed";
  OrbitBoxes o;
  o.a = "4.381";
  o.period = 6;
  // expanded from the compact common-prefix notation: prefix_{lo}^{hi}
  o.text = {
      {"-7.44826514033532", "-7.448265140244187", "0.03638524011881493", "0.03638524011973746"},
      {"-5.432682771276081", "-5.432682771080253", "0.03812100247833106", "0.03812100248150609"},
      {"-8.146150765219835", "-8.146150765118602", "0.03585533157361669", "0.03585533157606319"},
      {"-4.052482471003891", "-4.052482470816507", "0.03953831884313481", "0.03953831884723778"},
      {"-6.988651597169091", "-6.988651596889441", "0.03675237717289087", "0.0367523771731595"},
      {"-6.385380925198882", "-6.385380924637889", "0.03725846245305077", "0.0372584624617641"},
  };
  o.note = "endpoints expanded from the printed common-prefix notation";
  o.rebuild();
  c.orbit = o;
  c.expected_periods_upto20 = range_periods(1, 20, [](int m) { return m == 1 || m % 2 == 0; });
  c.orbit_guess = centers_of(c.grid);
  return c;
}

CaseStudy case_542() {
  CaseStudy c;
  c.key = "5.42";
  c.a = "5.42";
  c.period = 6;
  // The outer chart is printed with off-diagonal signs [-1, -s; s, -1]. Read
  // that way the orbit sits outside G in the transverse coordinate by more than
  // ten radii, so the rotation sense used for G3 and G5 is restored here.
  c.grid = cyclic_grid("G6", hset("-6.60556", "0.0317909", "-1.", "0.000573253", "-0.000573253", "-1.", "3.57445", "0.00035"),
                       {
                           hset("-3.33039", "0.0338101", "1.", "0.0114844", "0.000763188", "-0.999934", "0.0015225", "0.000525"),
                           hset("-6.04388", "0.0319883", "1.", "0.566012", "0.000593828", "-0.824397", "0.0029925", "0.0005775"),
                           hset("-9.93", "0.0299851", "1.", "0.866643", "0.000450065", "0.498928", "0.0021", "0.00105"),
                           hset("-3.56111", "0.0336361", "1.", "0.0148011", "0.000745026", "-0.99989", "0.0043575", "0.000525"),
                           hset("-6.45014", "0.031751", "1.", "0.999296", "0.000574732", "-0.0375247", "0.00945", "0.013125"),
                           hset("-10.0618", "0.029926", "1.", "0.887687", "0.000446372", "0.460448", "0.00084", "0.0011025"),
                       });
  c.grid.note = "outer chart off-diagonal signs swapped relative to the printed [-1, -0.000573253; 0.000573253, -1]; all other numbers as printed";
  OrbitBoxes o;
  o.a = "5.42";
  o.period = 6;
  o.text = {
      {"-3.330388727960296", "-3.33038872794934", "0.03381008102270888", "0.03381008102286536"},
      {"-6.043878148233535", "-6.043878148213811", "0.03198830541026752", "0.03198830541028062"},
      {"-9.93000468871182", "-9.930004688693574", "0.02998512226572283", "0.02998512226583182"},
      {"-3.561109751505439", "-3.561109751469876", "0.03363611142511445", "0.03363611142566204"},
      {"-6.450138010324274", "-6.450138010261234", "0.03175097764903493", "0.03175097764907362"},
      {"-10.06181179891221", "-10.06181179888145", "0.02992604451798922", "0.02992604451853264"},
  };
  o.note = "endpoints expanded from the printed common-prefix notation";
  o.rebuild();
  c.orbit = o;
  c.expected_periods_upto20 = range_periods(1, 20, [](int) { return true; });
  c.orbit_guess = centers_of(c.grid);
  return c;
}

json hset_json(const AffineHSet& s) {
  return json{{"center", s.center_text}, {"chart", s.chart_text}, {"radii", s.radii_text}};
}

AffineHSet hset_from(const json& j) {
  auto strings = [&](const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) throw std::invalid_argument(std::string("grid JSON: missing array '") + key + "'");
    std::vector<std::string> v;
    for (const auto& e : j.at(key)) {
      if (!e.is_string()) throw std::invalid_argument(std::string("grid JSON: '") + key + "' entries must be decimal strings");
      v.push_back(e.get<std::string>());
    }
    return v;
  };
  return AffineHSet::from_text(strings("center"), strings("chart"), strings("radii"));
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

CaseStudy builtin_case(const std::string& key) {
  if (key == "5.25") return case_525();
  if (key == "4.7") return case_47();
  if (key == "4.381") return case_4381();
  if (key == "5.42") return case_542();
  throw std::invalid_argument("unknown case '" + key + "' (expected one of 5.25, 4.7, 4.381, 5.42)");
}

std::vector<std::string> builtin_keys() { return {"5.25", "4.7", "4.381", "5.42"}; }

std::string grid_to_json(const ContractingGridSpec& g, const std::string& a) {
  json j;
  j["format"] = "cgrid.grid/1";
  j["name"] = g.name;
  if (!a.empty()) j["a"] = a;
  j["outer"] = hset_json(g.outer);
  json cubes = json::array();
  for (std::size_t i = 0; i < g.cubes.size(); ++i) {
    json c = hset_json(g.cubes[i]);
    c["clip"] = static_cast<bool>(g.clip[i]);
    cubes.push_back(c);
  }
  j["cubes"] = cubes;
  std::vector<std::size_t> succ;
  for (auto s : g.next) succ.push_back(s + 1);
  j["successor"] = succ;
  if (!g.note.empty()) j["note"] = g.note;
  return j.dump(2) + "\n";
}

ContractingGridSpec grid_from_json(const std::string& text, std::string* a) {
  const json j = parse_json(text);
  try {
    ContractingGridSpec g;
    g.name = j.value("name", "");
    g.note = j.value("note", "");
    if (a) *a = j.value("a", "");
    g.outer = hset_from(j.at("outer"));
    for (const auto& c : j.at("cubes")) {
      g.cubes.push_back(hset_from(c));
      g.clip.push_back(c.value("clip", true));
    }
    for (const auto& s : j.at("successor")) {
      const long v = s.get<long>();
      if (v < 1 || v > static_cast<long>(g.cubes.size())) throw std::invalid_argument("grid JSON: successor index out of range");
      g.next.push_back(static_cast<std::size_t>(v - 1));
    }
    validate_grid(g);
    return g;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("grid JSON: ") + e.what());
  }
}

std::string orbit_to_json(const OrbitBoxes& o) {
  json j;
  j["format"] = "cgrid.orbit/1";
  j["a"] = o.a;
  j["period"] = o.period;
  json boxes = json::array();
  for (const auto& t : o.text) boxes.push_back(json{{"y", {t[0], t[1]}}, {"z", {t[2], t[3]}}});
  j["boxes"] = boxes;
  if (!o.note.empty()) j["note"] = o.note;
  return j.dump(2) + "\n";
}

OrbitBoxes orbit_from_json(const std::string& text) {
  const json j = parse_json(text);
  try {
    OrbitBoxes o;
    o.a = j.value("a", "");
    o.period = j.value("period", 0);
    o.note = j.value("note", "");
    for (const auto& b : j.at("boxes"))
      o.text.push_back({b.at("y").at(0).get<std::string>(), b.at("y").at(1).get<std::string>(), b.at("z").at(0).get<std::string>(),
                        b.at("z").at(1).get<std::string>()});
    o.rebuild();
    return o;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("orbit JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cgrid
