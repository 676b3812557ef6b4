#include "secbeam/channel_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "secbeam/errors.hpp"

namespace secbeam {

namespace {

using nlohmann::json;

double require_positive_number(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError("parse_instance: missing key " + key);
  const json& v = doc.at(key);
  if (!v.is_number()) throw ParseError("parse_instance: " + key + " must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x))
    throw ParseError("parse_instance: " + key + " must be positive and finite");
  return x;
}

ChannelVector parse_channel(const json& arr, int n, const std::string& key) {
  if (!arr.is_array() || static_cast<int>(arr.size()) != n)
    throw ParseError("parse_instance: " + key + " must be a list of " + std::to_string(n) +
                     " complex entries");
  ChannelVector v(n);
  for (int i = 0; i < n; ++i) {
    const json& e = arr.at(i);
    if (!e.is_array() || e.size() != 2 || !e.at(0).is_number() || !e.at(1).is_number())
      throw ParseError("parse_instance: " + key + "[" + std::to_string(i) +
                       "] must be a [re, im] pair");
    v(i) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
  }
  if (!v.allFinite())
    throw ParseError("parse_instance: " + key + " has non-finite entries");
  return v;
}

std::vector<ChannelVector> parse_channel_list(const json& doc, const std::string& key, int n) {
  if (!doc.contains(key)) throw ParseError("parse_instance: missing key " + key);
  const json& list = doc.at(key);
  if (!list.is_array() || list.empty())
    throw ParseError("parse_instance: " + key + " must be a non-empty list");
  std::vector<ChannelVector> out;
  out.reserve(list.size());
  for (std::size_t i = 0; i < list.size(); ++i)
    out.push_back(parse_channel(list.at(i), n, key + "[" + std::to_string(i) + "]"));
  return out;
}

json channel_to_json(const ChannelVector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i)
    arr.push_back(json::array({v(i).real(), v(i).imag()}));
  return arr;
}

}  // namespace

SystemInstance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("parse_instance: invalid document: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("parse_instance: top-level object expected");

  if (!doc.contains("n_antennas")) throw ParseError("parse_instance: missing key n_antennas");
  if (!doc.at("n_antennas").is_number_integer())
    throw ParseError("parse_instance: n_antennas must be an integer");
  const int n = doc.at("n_antennas").get<int>();
  if (n <= 0) throw ParseError("parse_instance: n_antennas must be positive");

  const double noise = require_positive_number(doc, "noise_power");

  const bool has_db = doc.contains("power_budget_db");
  const bool has_linear = doc.contains("power_budget_linear");
  if (has_db == has_linear)
    throw ParseError(
        "parse_instance: exactly one of power_budget_db or power_budget_linear is required");
  double budget;
  if (has_db) {
    if (!doc.at("power_budget_db").is_number())
      throw ParseError("parse_instance: power_budget_db must be a number");
    budget = db_to_linear(doc.at("power_budget_db").get<double>());
    if (!(budget > 0.0) || !std::isfinite(budget))
      throw ParseError("parse_instance: power_budget_db is out of range");
  } else {
    budget = require_positive_number(doc, "power_budget_linear");
  }

  auto users = parse_channel_list(doc, "users", n);
  auto eves = parse_channel_list(doc, "eves", n);

  try {
    return SystemInstance(n, std::move(users), std::move(eves), noise, budget);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("parse_instance: ") + e.what());
  }
}

std::string serialize_instance(const SystemInstance& inst) {
  json doc;
  doc["n_antennas"] = inst.n();
  doc["noise_power"] = inst.noise_power();
  doc["power_budget_linear"] = inst.power_budget();
  json users = json::array();
  for (const auto& h : inst.users()) users.push_back(channel_to_json(h));
  json eves = json::array();
  for (const auto& z : inst.eves()) eves.push_back(channel_to_json(z));
  doc["users"] = std::move(users);
  doc["eves"] = std::move(eves);
  return doc.dump(2);
}

SystemInstance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace secbeam
