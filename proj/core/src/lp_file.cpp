#include <cctype>
#include <map>
#include <sstream>

#include "corxc/error.hpp"
#include "corxc/lp.hpp"

namespace corxc {

namespace {

constexpr std::size_t kLineWidth = 78;

// Integer coefficients for the row: multiply through by the lcm of the
// denominators (the rhs included).
std::vector<mpz_class> scaled(const std::vector<LinearTerm>& terms, const Rational* rhs, mpz_class& rhs_out) {
  mpz_class l = 1;
  for (const auto& t : terms) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coefficient.get_den_mpz_t());
  if (rhs) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), rhs->get_den_mpz_t());
  std::vector<mpz_class> out;
  for (const auto& t : terms) out.push_back(mpz_class(t.coefficient.get_num() * (l / t.coefficient.get_den())));
  if (rhs) rhs_out = rhs->get_num() * (l / rhs->get_den());
  return out;
}

constexpr std::string_view kScaleComment = "\\ objective scale: ";

mpz_class objective_scale(const std::vector<LinearTerm>& terms) {
  mpz_class l = 1;
  for (const auto& t : terms) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coefficient.get_den_mpz_t());
  return l;
}

void write_row(std::ostringstream& os, const std::string& head, const LinearProgram& lp,
               const std::vector<LinearTerm>& terms, const Rational* rhs) {
  mpz_class r;
  const auto coeffs = scaled(terms, rhs, r);
  std::string line = " " + head + ":";
  auto emit = [&](const std::string& piece) {
    if (line.size() + piece.size() > kLineWidth) {
      os << line << '\n';
      line = "   ";
    }
    line += piece;
  };
  bool first = true;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (coeffs[i] == 0) continue;
    const bool neg = coeffs[i] < 0;
    const mpz_class mag = abs(coeffs[i]);
    std::string piece = neg ? " -" : (first ? "" : " +");
    piece += " ";
    if (mag != 1) piece += mag.get_str() + " ";
    piece += lp.variables[terms[i].variable];
    emit(piece);
    first = false;
  }
  if (first) emit(" 0");
  if (rhs) emit(" = " + r.get_str());
  os << line << '\n';
}

}  // namespace

std::string to_lp_file(const LinearProgram& lp) {
  lp.validate();
  std::ostringstream os;
  os << "\\ variables: " << lp.variables.size() << ", rows: " << lp.constraints.size() << '\n';
  // The objective is written times its denominator lcm; the reader divides
  // it back out so the optimum value survives the round trip.
  if (const auto k = objective_scale(lp.objective); k != 1) os << kScaleComment << k.get_str() << '\n';
  os << "Maximize\n";
  write_row(os, "obj", lp, lp.objective, nullptr);
  os << "Subject To\n";
  for (const auto& c : lp.constraints) write_row(os, c.name, lp, c.terms, &c.rhs);
  os << "Bounds\n";
  for (const auto& v : lp.variables) os << ' ' << v << " >= 0\n";
  os << "End\n";
  return os.str();
}

// --- reader --------------------------------------------------------------------

namespace {

enum class Section { none, objective, constraints, bounds, done };

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

struct PendingRow {
  std::string name;
  std::vector<std::pair<std::string, Rational>> terms;
  std::optional<Rational> rhs;
};

bool is_number(const std::string& tok) {
  return !tok.empty() && (std::isdigit(static_cast<unsigned char>(tok.front())) != 0);
}

}  // namespace

LinearProgram parse_lp_file(std::string_view text) {
  // Tokenise: comments start with '\'; ':' and the operators stand alone.
  std::vector<std::string> tokens;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::size_t> token_line;
  Rational objective_divisor = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.starts_with(kScaleComment)) {
      try {
        objective_divisor = parse_rational(line.substr(kScaleComment.size()));
      } catch (const Error&) {
        throw ParseError("LP file line " + std::to_string(line_no) + ": bad objective scale");
      }
      if (objective_divisor <= 0) throw ParseError("LP file line " + std::to_string(line_no) + ": bad objective scale");
    }
    if (const auto c = line.find('\\'); c != std::string::npos) line.erase(c);
    std::string cur;
    auto flush = [&] {
      if (!cur.empty()) {
        tokens.push_back(cur);
        token_line.push_back(line_no);
        cur.clear();
      }
    };
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        flush();
      } else if (ch == ':' || ch == '+' || ch == '-' || ch == '=') {
        flush();
        tokens.emplace_back(1, ch);
        token_line.push_back(line_no);
      } else if (ch == '>' || ch == '<') {
        flush();
        std::string op(1, ch);
        if (i + 1 < line.size() && line[i + 1] == '=') {
          op += '=';
          ++i;
        }
        tokens.push_back(op);
        token_line.push_back(line_no);
      } else {
        cur += ch;
      }
    }
    flush();
  }

  auto fail = [&](std::size_t i, const std::string& what) -> ParseError {
    const auto ln = i < token_line.size() ? token_line[i] : line_no;
    return ParseError("LP file line " + std::to_string(ln) + ": " + what);
  };

  Section section = Section::none;
  bool maximize = true;
  std::vector<PendingRow> rows;
  PendingRow objective;
  std::vector<std::string> bounds_order;
  PendingRow* current = nullptr;
  Rational sign = 1;
  std::optional<Rational> coeff;
  bool after_eq = false;

  // A bare constant (the " 0" of an empty objective) is allowed before a
  // section change; anything else dangling is an error.
  auto close_row = [&](std::size_t at) {
    if (coeff && *coeff != 0) throw fail(at, "coefficient without a variable");
    coeff.reset();
  };

  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto& tok = tokens[i];
    const auto low = lower(tok);
    if (low == "maximize" || low == "maximise" || low == "max" || low == "minimize" || low == "minimise" ||
        low == "min" || low == "subject" || low == "st" || low == "s.t." || low == "bounds" || low == "end") {
      close_row(i);
    }
    if (low == "maximize" || low == "maximise" || low == "max" || low == "minimize" || low == "minimise" ||
        low == "min") {
      maximize = low.starts_with("max");
      section = Section::objective;
      objective = PendingRow{};
      current = &objective;
      sign = 1;
      coeff.reset();
      after_eq = false;
      ++i;
      continue;
    }
    if (low == "subject" && i + 1 < tokens.size() && lower(tokens[i + 1]) == "to") {
      section = Section::constraints;
      current = nullptr;
      i += 2;
      continue;
    }
    if (low == "st" || low == "s.t.") {
      section = Section::constraints;
      current = nullptr;
      ++i;
      continue;
    }
    if (low == "bounds") {
      section = Section::bounds;
      current = nullptr;
      ++i;
      continue;
    }
    if (low == "end") {
      section = Section::done;
      ++i;
      continue;
    }
    switch (section) {
      case Section::none:
      case Section::done:
        throw fail(i, "unexpected token '" + tok + "'");
      case Section::bounds: {
        // name >= 0
        if (i + 2 >= tokens.size() || tokens[i + 1] != ">=" || tokens[i + 2] != "0") {
          throw fail(i, "only 'name >= 0' bounds are supported");
        }
        bounds_order.push_back(tok);
        i += 3;
        continue;
      }
      case Section::objective:
      case Section::constraints: {
        if (i + 1 < tokens.size() && tokens[i + 1] == ":" && !is_number(tok)) {
          if (section == Section::constraints) {
            if (current && !current->rhs) throw fail(i, "row '" + current->name + "' has no '= rhs'");
            rows.push_back(PendingRow{tok, {}, {}});
            current = &rows.back();
          } else {
            current->name = tok;
          }
          sign = 1;
          coeff.reset();
          after_eq = false;
          i += 2;
          continue;
        }
        if (!current) throw fail(i, "expected a row name");
        if (tok == "+" || tok == "-") {
          if (tok == "-") sign = -sign;
        } else if (tok == "=") {
          if (section != Section::constraints) throw fail(i, "'=' in objective");
          after_eq = true;
        } else if (tok == ">=" || tok == "<=" || tok == ">" || tok == "<") {
          throw fail(i, "only equality rows are supported");
        } else if (is_number(tok)) {
          Rational value;
          try {
            value = parse_rational(tok);
          } catch (const Error&) {
            throw fail(i, "bad number '" + tok + "'");
          }
          if (after_eq) {
            if (current->rhs) throw fail(i, "row '" + current->name + "' has two right-hand sides");
            current->rhs = sign * value;
            sign = 1;
          } else if (coeff) {
            throw fail(i, "two coefficients in a row");
          } else {
            coeff = sign * value;
            sign = 1;
          }
        } else {
          if (after_eq) throw fail(i, "variable on the right-hand side");
          current->terms.emplace_back(tok, coeff ? *coeff : sign);
          coeff.reset();
          sign = 1;
        }
        ++i;
        continue;
      }
    }
  }
  if (section != Section::done) throw ParseError("LP file: missing End");
  if (current && section != Section::objective && !rows.empty() && !rows.back().rhs) {
    throw ParseError("LP file: row '" + rows.back().name + "' has no '= rhs'");
  }
  LinearProgram lp;
  std::map<std::string, std::size_t> pos;
  auto declare = [&](const std::string& name) {
    if (pos.emplace(name, lp.variables.size()).second) lp.add_variable(name);
    return pos.at(name);
  };
  for (const auto& b : bounds_order) declare(b);
  auto convert = [&](const std::vector<std::pair<std::string, Rational>>& terms) {
    std::map<std::size_t, Rational> merged;
    for (const auto& [name, c] : terms) merged[declare(name)] += c;
    std::vector<LinearTerm> out;
    for (const auto& [v, c] : merged) {
      if (c != 0) out.push_back(LinearTerm{v, c});
    }
    return out;
  };
  lp.objective = convert(objective.terms);
  for (auto& t : lp.objective) {
    t.coefficient /= objective_divisor;
    if (!maximize) t.coefficient = -t.coefficient;
  }
  for (const auto& r : rows) {
    lp.constraints.push_back(EqualityConstraint{r.name, convert(r.terms), *r.rhs});
  }
  lp.validate();
  return lp;
}

}  // namespace corxc
