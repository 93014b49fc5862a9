#include "profinite/index.hpp"

#include <algorithm>
#include <sstream>

#include "profinite/errors.hpp"

namespace profinite {

Index Index::params(ParamSet ts) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  Index out;
  out.value_ = std::move(ts);
  return out;
}

std::int64_t Index::integer() const {
  if (!is_integer()) throw std::logic_error("index is not an integer: " + to_string());
  return std::get<std::int64_t>(value_);
}

const ParamSet& Index::param_set() const {
  if (!is_params()) throw std::logic_error("index is not a parameter set: " + to_string());
  return std::get<ParamSet>(value_);
}

std::string Index::to_string() const {
  if (is_integer()) return std::to_string(std::get<std::int64_t>(value_));
  std::ostringstream os;
  os.precision(17);
  os << '{';
  const auto& ts = std::get<ParamSet>(value_);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (i) os << ',';
    os << ts[i];
  }
  os << '}';
  return os.str();
}

Index parse_index(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ') s.push_back(c);
  if (s.empty()) throw ParseError("empty index");
  if (s.front() == '{') {
    if (s.back() != '}') throw ParseError("unterminated parameter set: " + text);
    ParamSet ts;
    std::string body = s.substr(1, s.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        ts.push_back(std::stod(item, &used));
        if (used != item.size()) throw ParseError("bad parameter: " + item);
      } catch (const std::logic_error&) {
        throw ParseError("bad parameter: " + item);
      }
    }
    return Index::params(std::move(ts));
  }
  try {
    std::size_t used = 0;
    long long n = std::stoll(s, &used);
    if (used != s.size()) throw ParseError("bad index: " + text);
    return Index(static_cast<std::int64_t>(n));
  } catch (const std::logic_error&) {
    throw ParseError("bad index: " + text);
  }
}

}  // namespace profinite
