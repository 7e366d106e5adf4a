#include "kdoptics/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace kdoptics::cli {

using nlohmann::json;

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ConfigError("config root must be an object");
    return j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' does not parse: " + e.what());
  }
}

Section::Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
  if (node_.is_null()) node_ = json::object();
  if (!node_.is_object()) throw ConfigError(path_.empty() ? "config root must be an object" : "'" + path_ + "' must be an object");
}

void Section::fail(const std::string& key, const std::string& what) const {
  throw ConfigError("config field '" + (path_.empty() ? key : path_ + "." + key) + "' " + what);
}

const json* Section::lookup(const std::string& key) {
  used_.insert(key);
  const auto it = node_.find(key);
  return it == node_.end() || it->is_null() ? nullptr : &*it;
}

bool Section::has(const std::string& key) const { return node_.contains(key); }

double Section::number(const std::string& key, double fallback) {
  const json* v = lookup(key);
  double out = fallback;
  if (v) {
    if (!v->is_number()) fail(key, "must be a number");
    out = v->get<double>();
    if (!std::isfinite(out)) fail(key, "must be finite");
  }
  echo_[key] = out;
  return out;
}

std::size_t Section::count(const std::string& key, std::size_t fallback) {
  const json* v = lookup(key);
  std::size_t out = fallback;
  if (v) {
    if (!v->is_number_integer() || v->get<long long>() < 0) fail(key, "must be a nonnegative integer");
    out = v->get<std::size_t>();
  }
  echo_[key] = out;
  return out;
}

std::uint64_t Section::u64(const std::string& key, std::uint64_t fallback) {
  const json* v = lookup(key);
  std::uint64_t out = fallback;
  if (v) {
    if (!v->is_number_unsigned()) fail(key, "must be an unsigned integer");
    out = v->get<std::uint64_t>();
  }
  echo_[key] = out;
  return out;
}

int Section::sign(const std::string& key, int fallback) {
  const json* v = lookup(key);
  int out = fallback;
  if (v) {
    if (!v->is_number_integer() || (v->get<int>() != 1 && v->get<int>() != -1)) fail(key, "must be +1 or -1");
    out = v->get<int>();
  }
  echo_[key] = out;
  return out;
}

pol::Complex Section::complex(const std::string& key, pol::Complex fallback) {
  const json* v = lookup(key);
  pol::Complex out = fallback;
  if (v) {
    if (v->is_number()) {
      out = v->get<double>();
    } else if (v->is_array() && v->size() == 2 && (*v)[0].is_number() && (*v)[1].is_number()) {
      out = {(*v)[0].get<double>(), (*v)[1].get<double>()};
    } else {
      fail(key, "must be a number or [re, im]");
    }
  }
  echo_[key] = {out.real(), out.imag()};
  return out;
}

pol::StokesVector Section::stokes(const std::string& key, pol::StokesVector fallback) {
  const json* v = lookup(key);
  pol::StokesVector out = fallback;
  if (v) {
    if (!v->is_array() || v->size() != 3) fail(key, "must be [sx, sy, sz]");
    for (const json& c : *v)
      if (!c.is_number()) fail(key, "must be [sx, sy, sz]");
    out = {(*v)[0].get<double>(), (*v)[1].get<double>(), (*v)[2].get<double>()};
  }
  echo_[key] = {out.x, out.y, out.z};
  return out;
}

pol::BasisAxis Section::axis(const std::string& key, const std::string& fallback) {
  const json* v = lookup(key);
  const json given = v ? *v : json(fallback);
  pol::BasisAxis out = pol::z_axis();
  if (given.is_string()) {
    const std::string name = given.get<std::string>();
    if (name == "x") out = pol::x_axis();
    else if (name == "y") out = pol::y_axis();
    else if (name == "z") out = pol::z_axis();
    else fail(key, "must name \"x\", \"y\" or \"z\"");
  } else if (given.is_array() && given.size() == 3 && given[0].is_number() && given[1].is_number() &&
             given[2].is_number()) {
    out = pol::BasisAxis({given[0].get<double>(), given[1].get<double>(), given[2].get<double>()});
  } else if (given.is_object()) {
    Section angles(given, path_.empty() ? key : path_ + "." + key);
    const double theta = angles.number("theta", 0.0);
    const double phi = angles.number("phi", 0.0);
    angles.finish();
    out = pol::BasisAxis::from_angles(theta, phi);
  } else {
    fail(key, "must be an axis name, a unit 3-vector, or {\"theta\", \"phi\"}");
  }
  echo_[key] = given;
  return out;
}

std::string Section::text(const std::string& key, const std::string& fallback) {
  const json* v = lookup(key);
  std::string out = fallback;
  if (v) {
    if (!v->is_string()) fail(key, "must be a string");
    out = v->get<std::string>();
  }
  echo_[key] = out;
  return out;
}

Section Section::child(const std::string& key) {
  const json* v = lookup(key);
  return Section(v ? *v : json(), path_.empty() ? key : path_ + "." + key);
}

void Section::adopt(const std::string& key, Section& child) {
  child.finish();
  echo_[key] = child.echo();
}

void Section::finish() const {
  for (const auto& [key, value] : node_.items())
    if (!used_.count(key)) throw ConfigError("unknown config field '" + (path_.empty() ? key : path_ + "." + key) + "'");
}

}  // namespace kdoptics::cli
