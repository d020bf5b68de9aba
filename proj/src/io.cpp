#include "abidsim/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace abidsim {

using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, x);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw std::invalid_argument("bad number literal: '" + s + "'");
  }
  return x;
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["bidders"] = json::array();
  for (const Bidder& b : inst.bidders()) {
    doc["bidders"].push_back(
        {{"id", b.id}, {"target", format_double(b.target)}});
  }
  doc["queries"] = json::array();
  for (const Query& q : inst.queries()) {
    json values = json::array(), ctrs = json::array();
    for (double v : q.values) values.push_back(format_double(v));
    for (double c : q.ctrs) ctrs.push_back(format_double(c));
    doc["queries"].push_back(
        {{"id", q.id}, {"values", values}, {"ctrs", ctrs}});
  }
  return doc.dump(2) + "\n";
}

Instance instance_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("instance file is not JSON: ") +
                                e.what());
  }
  if (!doc.is_object() || !doc.contains("bidders") || !doc.contains("queries")) {
    throw std::invalid_argument(
        "instance file needs 'bidders' and 'queries' arrays");
  }

  auto number = [](const json& v) {
    if (v.is_string()) return parse_double(v.get<std::string>());
    if (v.is_number()) return v.get<double>();
    throw std::invalid_argument("expected a number or numeric string");
  };

  std::vector<Bidder> bidders;
  for (const json& b : doc["bidders"]) {
    bidders.push_back({b.at("id").get<BidderId>(), number(b.at("target"))});
  }
  std::vector<Query> queries;
  for (const json& q : doc["queries"]) {
    Query out;
    out.id = q.at("id").get<QueryId>();
    for (const json& v : q.at("values")) out.values.push_back(number(v));
    if (q.contains("ctrs")) {
      for (const json& c : q["ctrs"]) out.ctrs.push_back(number(c));
    }
    queries.push_back(std::move(out));
  }
  return Instance(std::move(bidders), std::move(queries));
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << instance_to_json(inst);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace abidsim
