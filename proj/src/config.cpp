/*
 * Copyright 2026 The lifeins Authors
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lifeins::config {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigInvalid, (field.empty() ? what : field + ": " + what), field);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

// TOML subset reader.
class TomlReader {
 public:
  explicit TomlReader(std::string_view text) : text_(text) {}

  Json read() {
    Json root = Json::object();
    Json* table = &root;
    std::size_t start = 0;
    while (start <= text_.size()) {
      std::size_t end = text_.find('\n', start);
      if (end == std::string_view::npos) end = text_.size();
      ++line_;
      line_text_ = text_.substr(start, end - start);
      pos_ = 0;
      skip_space();
      if (!at_end() && peek() != '#') {
        if (peek() == '[') {
          table = &open_table(root);
        } else {
          read_pair(*table);
        }
      }
      start = end + 1;
    }
    return root;
  }

 private:
  std::string_view text_;
  std::string_view line_text_;
  std::size_t pos_ = 0;
  int line_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    invalid("", "TOML line " + std::to_string(line_) + ": " + what);
  }
  bool at_end() const { return pos_ >= line_text_.size(); }
  char peek() const { return line_text_[pos_]; }
  void skip_space() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }
  void expect_line_end() {
    skip_space();
    if (!at_end() && peek() != '#') fail("unexpected text after value");
  }

  std::string read_key() {
    skip_space();
    if (!at_end() && peek() == '"') return read_string();
    const std::size_t begin = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' ||
                         peek() == '-')) {
      ++pos_;
    }
    if (pos_ == begin) fail("expected a key");
    return std::string(line_text_.substr(begin, pos_ - begin));
  }

  Json& open_table(Json& root) {
    ++pos_;
    Json* t = &root;
    while (true) {
      const std::string key = read_key();
      if (!t->contains(key)) (*t)[key] = Json::object();
      t = &(*t)[key];
      if (!t->is_object()) fail("'" + key + "' is already a value");
      skip_space();
      if (!at_end() && peek() == '.') {
        ++pos_;
        continue;
      }
      break;
    }
    if (at_end() || peek() != ']') fail("expected ']'");
    ++pos_;
    expect_line_end();
    return *t;
  }

  void read_pair(Json& table) {
    const std::string key = read_key();
    skip_space();
    if (at_end() || peek() != '=') fail("expected '=' after '" + key + "'");
    ++pos_;
    skip_space();
    if (table.contains(key)) fail("duplicate key '" + key + "'");
    table[key] = read_value();
    expect_line_end();
  }

  std::string read_string() {
    ++pos_;
    std::string out;
    while (!at_end() && peek() != '"') {
      char c = peek();
      ++pos_;
      if (c == '\\') {
        if (at_end()) fail("unterminated escape");
        const char e = peek();
        ++pos_;
        switch (e) {
          case 'n': c = '\n'; break;
          case 't': c = '\t'; break;
          case '"': c = '"'; break;
          case '\\': c = '\\'; break;
          default: fail(std::string("unsupported escape \\") + e);
        }
      }
      out.push_back(c);
    }
    if (at_end()) fail("unterminated string");
    ++pos_;
    return out;
  }

  Json read_value() {
    if (at_end()) fail("missing value");
    const char c = peek();
    if (c == '"') return read_string();
    if (c == '[') {
      ++pos_;
      Json arr = Json::array();
      skip_space();
      while (!at_end() && peek() != ']') {
        arr.push_back(read_value());
        skip_space();
        if (!at_end() && peek() == ',') {
          ++pos_;
          skip_space();
        }
      }
      if (at_end()) fail("arrays must close on the same line");
      ++pos_;
      return arr;
    }
    const std::size_t begin = pos_;
    while (!at_end() && peek() != ',' && peek() != ']' && peek() != '#' && peek() != ' ' &&
           peek() != '\t' && peek() != '\r') {
      ++pos_;
    }
    std::string word(line_text_.substr(begin, pos_ - begin));
    if (word == "true") return true;
    if (word == "false") return false;
    word.erase(std::remove(word.begin(), word.end(), '_'), word.end());
    if (!word.empty() && word[0] == '+') word.erase(0, 1);
    const bool integral = word.find_first_of(".eE") == std::string::npos;
    if (integral) {
      long long v = 0;
      const auto res = std::from_chars(word.data(), word.data() + word.size(), v);
      if (res.ec == std::errc() && res.ptr == word.data() + word.size()) return v;
    } else {
      double v = 0.0;
      const auto res = std::from_chars(word.data(), word.data() + word.size(), v);
      if (res.ec == std::errc() && res.ptr == word.data() + word.size()) return v;
    }
    fail("cannot read value '" + word + "'");
  }
};

const std::vector<std::string> kScenarioKeys = {"r",        "mu",       "sigma",    "lambda_x",
                                                "lambda_y", "income_x", "income_y", "alpha",
                                                "premium",  "wealth",   "schema"};

}  // namespace

Format format_for_path(std::string_view path) {
  const std::size_t dot = path.rfind('.');
  if (dot == std::string_view::npos) return Format::Json;
  std::string ext(path.substr(dot + 1));
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == "toml" ? Format::Toml : Format::Json;
}

Json parse(std::string_view text, Format format) {
  if (format == Format::Toml) return TomlReader(text).read();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    invalid("", std::string("malformed JSON: ") + e.what());
  }
}

Json load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) invalid("config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), format_for_path(path));
}

void reject_unknown(const Json& obj, const std::vector<std::string>& allowed,
                    const std::string& path) {
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      invalid(join(path, item.key()), "unknown key");
    }
  }
}

std::optional<double> optional_number(const Json& obj, const std::string& key,
                                      const std::string& path) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) invalid(join(path, key), "must be a number");
  return it->get<double>();
}

double number_at(const Json& obj, const std::string& key, const std::string& path) {
  const std::optional<double> v = optional_number(obj, key, path);
  if (!v) invalid(join(path, key), "missing");
  return *v;
}

std::vector<Scheme> Scenario::schemes() const {
  if (premium.scheme) return {*premium.scheme};
  return {Scheme::Single, Scheme::Continuous};
}

Scenario scenario_from_json(const Json& doc, const std::vector<std::string>& extra) {
  if (!doc.is_object()) invalid("", "document must be an object");
  std::vector<std::string> allowed = kScenarioKeys;
  allowed.insert(allowed.end(), extra.begin(), extra.end());
  reject_unknown(doc, allowed, "");
  if (doc.contains("schema") && doc["schema"] != "v1") invalid("schema", "only \"v1\" is supported");

  Scenario s;
  s.market = {number_at(doc, "r", ""), number_at(doc, "mu", ""), number_at(doc, "sigma", "")};
  s.household = {number_at(doc, "lambda_x", ""), number_at(doc, "lambda_y", ""),
                 number_at(doc, "income_x", ""), number_at(doc, "income_y", ""),
                 number_at(doc, "alpha", "")};
  s.wealth = optional_number(doc, "wealth", "");

  const auto it = doc.find("premium");
  if (it != doc.end() && !it->is_null()) {
    const Json& p = *it;
    if (!p.is_object()) invalid("premium", "must be an object");
    reject_unknown(p, {"scheme", "loading", "loss_probability", "rate"}, "premium");
    if (p.contains("scheme")) {
      if (!p["scheme"].is_string()) invalid("premium.scheme", "must be a string");
      const std::string name = p["scheme"].get<std::string>();
      if (name == "single") {
        s.premium.scheme = Scheme::Single;
      } else if (name == "continuous") {
        s.premium.scheme = Scheme::Continuous;
      } else if (name != "both") {
        invalid("premium.scheme", "must be one of single, continuous, both");
      }
    }
    int given = 0;
    for (const auto& [key, kind] :
         {std::pair{"loading", PremiumSpec::Kind::Loading},
          std::pair{"loss_probability", PremiumSpec::Kind::LossProbability},
          std::pair{"rate", PremiumSpec::Kind::Rate}}) {
      if (const auto v = optional_number(p, key, "premium")) {
        ++given;
        s.premium.kind = kind;
        s.premium.value = *v;
      }
    }
    if (given > 1) invalid("premium", "give only one of loading, loss_probability, rate");
    if (s.premium.kind == PremiumSpec::Kind::Rate && !s.premium.scheme) {
      invalid("premium.scheme", "an explicit rate needs scheme single or continuous");
    }
  }
  return s;
}

Json to_json(const Scenario& s) {
  Json doc = {{"r", s.market.r},
              {"mu", s.market.mu},
              {"sigma", s.market.sigma},
              {"lambda_x", s.household.lambda_x},
              {"lambda_y", s.household.lambda_y},
              {"income_x", s.household.income_x},
              {"income_y", s.household.income_y},
              {"alpha", s.household.alpha}};
  Json p = {{"scheme", s.premium.scheme ? std::string(to_string(*s.premium.scheme)) : "both"}};
  switch (s.premium.kind) {
    case PremiumSpec::Kind::Loading: p["loading"] = s.premium.value; break;
    case PremiumSpec::Kind::LossProbability: p["loss_probability"] = s.premium.value; break;
    case PremiumSpec::Kind::Rate: p["rate"] = s.premium.value; break;
  }
  doc["premium"] = p;
  if (s.wealth) doc["wealth"] = *s.wealth;
  return doc;
}

PremiumQuote quote_for(const Scenario& s, const MarketParams& mkt, const HouseholdParams& hh,
                       Scheme scheme) {
  switch (s.premium.kind) {
    case PremiumSpec::Kind::Loading:
      return Pricing::loadings(s.premium.value, s.premium.value).quote(mkt, hh, scheme);
    case PremiumSpec::Kind::LossProbability:
      return Pricing::target_loss(s.premium.value).quote(mkt, hh, scheme);
    case PremiumSpec::Kind::Rate: break;
  }
  const double rate = s.premium.value;
  const double lam = hh.total_hazard();
  if (scheme == Scheme::Single) {
    if (!(rate > 0.0 && rate < 1.0)) {
      throw Error(ErrorCode::PremiumNotViable, "single premium rate must lie in (0, 1)",
                  "premium.rate");
    }
    PremiumQuote q{Scheme::Single, rate * (lam + mkt.r()) / lam - 1.0, rate, 0.0};
    q.loss_probability = implied_loss_probability(q, mkt, hh);
    return q;
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw Error(ErrorCode::InvalidParameter, "continuous premium rate must be > 0",
                "premium.rate");
  }
  PremiumQuote q{Scheme::Continuous, rate / lam - 1.0, rate, 0.0};
  q.loss_probability = implied_loss_probability(q, mkt, hh);
  return q;
}

Pricing pricing_for(const Scenario& s) {
  switch (s.premium.kind) {
    case PremiumSpec::Kind::Loading: return Pricing::loadings(s.premium.value, s.premium.value);
    case PremiumSpec::Kind::LossProbability: return Pricing::target_loss(s.premium.value);
    case PremiumSpec::Kind::Rate: break;
  }
  invalid("premium.rate", "this request needs a loading or a loss_probability");
}

}  // namespace lifeins::config
