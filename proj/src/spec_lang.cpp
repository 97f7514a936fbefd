/*
 * Copyright 2026 The sisverify Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sisv/spec_lang.hpp"

#include <cctype>
#include <charconv>
#include <set>

#include "sisv/errors.hpp"
#include "sisv/trace_io.hpp"

namespace sisv {

namespace {

enum class Tok { Word, Number, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> tokenize(std::string_view line, std::size_t line_number) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() &&
             (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) {
        ++j;
      }
      out.push_back({Tok::Word, std::string(line.substr(i, j - i)), i + 1});
      i = j;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      std::size_t j = i + 1;
      while (j < line.size() && std::isalnum(static_cast<unsigned char>(line[j]))) ++j;
      out.push_back({Tok::Number, std::string(line.substr(i, j - i)), i + 1});
      i = j;
    } else if (c == '(' || c == ')' || c == ',' || c == '=' || c == ':') {
      out.push_back({Tok::Punct, std::string(1, c), i + 1});
      ++i;
    } else {
      throw ParseError(std::string("unexpected character '") + c + "'", line_number, i + 1);
    }
  }
  out.push_back({Tok::End, "end of line", line.size() + 1});
  return out;
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

class LineParser {
 public:
  LineParser(std::string_view line, std::size_t line_number)
      : toks_(tokenize(line, line_number)), line_(line_number) {}

  Requirement parse() {
    Requirement r;
    keyword("REQ");
    r.id = word({"requirement id"}).text;
    punct(":");
    keyword("whenever");
    keyword("detection");
    punct("(");
    keyword("human");
    punct("=");
    r.trigger.human = classification();
    punct(",");
    keyword("zone");
    punct("=");
    r.trigger.zone = zone();
    punct(")");
    keyword("then");
    if (peek().kind == Tok::Word && peek().text == "within") {
      fail("empty response list", peek(), {"action"});
    }
    r.responses.insert(action());
    while (peek().kind == Tok::Word && peek().text == "and") {
      next();
      r.responses.insert(action());
    }
    keyword("within");
    r.deadline = number();
    if (peek().kind == Tok::Word && (peek().text == "ticks" || peek().text == "tick")) {
      next();
    } else {
      fail("expected 'ticks'", peek(), {"ticks"});
    }
    if (peek().kind != Tok::End) fail("trailing input '" + peek().text + "'", peek(), {"end of line"});
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, const Token& at,
                         std::vector<std::string> expected) const {
    throw ParseError(msg, line_, at.column, std::move(expected));
  }

  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  void keyword(const std::string& kw) {
    const auto& t = peek();
    if (t.kind != Tok::Word || (kw == "REQ" ? t.text != kw : lower(t.text) != kw)) {
      fail("unexpected '" + t.text + "'", t, {"'" + kw + "'"});
    }
    next();
  }

  void punct(const std::string& p) {
    const auto& t = peek();
    if (t.kind != Tok::Punct || t.text != p) fail("unexpected '" + t.text + "'", t, {"'" + p + "'"});
    next();
  }

  const Token& word(std::vector<std::string> expected) {
    const auto& t = peek();
    if (t.kind != Tok::Word) fail("unexpected '" + t.text + "'", t, std::move(expected));
    return next();
  }

  std::optional<Classification> classification() {
    const auto& t = word({"trained", "untrained", "any"});
    const auto w = lower(t.text);
    if (w == "any") return std::nullopt;
    if (auto c = parse_classification(w)) return c;
    fail("unknown classification '" + t.text + "'", t, {"trained", "untrained", "any"});
  }

  std::optional<Zone> zone() {
    const auto& t = word({"green", "yellow", "red", "any"});
    const auto w = lower(t.text);
    if (w == "any") return std::nullopt;
    if (auto z = parse_zone(w)) return z;
    fail("unknown zone '" + t.text + "'", t, {"green", "yellow", "red", "any"});
  }

  int number() {
    const auto& t = peek();
    int value = -1;
    if (t.kind == Tok::Number) {
      auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
      if (ec == std::errc() && ptr == t.text.data() + t.text.size() && value >= 0) {
        next();
        return value;
      }
    }
    fail("expected a nonnegative integer, got '" + t.text + "'", t, {"nonnegative integer"});
  }

  Action action() {
    static const std::vector<std::string> kActions = {
        "activate_alert", "deactivate_alert", "turn_uvc_off", "turn_uvc_on",
        "stop_robot", "set_speed"};
    const auto& t = word(kActions);
    const auto w = lower(t.text);
    if (w == "activate_alert") return Action::activate_alert(true);
    if (w == "deactivate_alert") return Action::activate_alert(false);
    if (w == "turn_uvc_off") return Action::turn_uvc(false);
    if (w == "turn_uvc_on") return Action::turn_uvc(true);
    if (w == "stop_robot") return Action::stop_robot();
    if (w == "set_speed") {
      punct("(");
      const int v = number();
      punct(")");
      return Action::set_speed(v);
    }
    fail("unknown action '" + t.text + "'", t, kActions);
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t line_;
};

}  // namespace

std::vector<Requirement> parse_requirements(std::string_view text) {
  std::vector<Requirement> out;
  std::set<std::string> ids;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    auto line = text.substr(pos, end - pos);
    pos = end + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      const auto comment = line.substr(hash);
      if (comment.starts_with("# sisv requirements ") &&
          comment.substr(0, kRequirementsHeader.size()) != kRequirementsHeader) {
        throw ParseError("unsupported requirements format version", line_number);
      }
      line = line.substr(0, hash);
    }
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    auto req = LineParser(line, line_number).parse();
    if (!ids.insert(req.id).second) {
      throw ParseError("duplicate requirement id '" + req.id + "'", line_number);
    }
    out.push_back(std::move(req));
  }
  return out;
}

std::vector<Requirement> read_requirements_file(const std::string& path) {
  return parse_requirements(read_text_file(path));
}

std::string requirement_action_name(const Action& a) {
  switch (a.kind()) {
    case ActionKind::ActivateAlert: return a.on() ? "activate_alert" : "deactivate_alert";
    case ActionKind::TurnUvc: return a.on() ? "turn_uvc_on" : "turn_uvc_off";
    case ActionKind::StopRobot: return "stop_robot";
    case ActionKind::SetSpeed: return "set_speed(" + std::to_string(a.speed()) + ")";
  }
  return "?";
}

std::string format_requirements(const std::vector<Requirement>& reqs) {
  std::string out(kRequirementsHeader);
  out += '\n';
  for (const auto& r : reqs) {
    out += "REQ " + r.id + " : whenever detection(" + to_string(r.trigger) + ") then ";
    bool first = true;
    for (const auto& a : r.responses) {
      if (!first) out += " and ";
      out += requirement_action_name(a);
      first = false;
    }
    out += " within " + std::to_string(r.deadline) + " ticks\n";
  }
  return out;
}

}  // namespace sisv
