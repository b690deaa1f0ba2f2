#include "fusionclust/mixture_parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>
#include <string>

#include "fusionclust/errors.hpp"

namespace fusionclust {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) {
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        text_.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
  }

  MixtureModel parse() {
    if (text_.empty()) fail("empty mixture");
    std::vector<Component> components;
    std::vector<std::optional<double>> weights;
    do {
      std::optional<double> weight;
      if (starts_number()) {
        weight = parse_weight();
        expect('*');
      }
      components.push_back(parse_component());
      weights.push_back(weight);
    } while (accept('+'));
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");

    const bool any = std::any_of(weights.begin(), weights.end(), [](auto& w) { return w.has_value(); });
    const bool all = std::all_of(weights.begin(), weights.end(), [](auto& w) { return w.has_value(); });
    if (any && !all) fail("either every term or no term must carry a weight");

    std::vector<double> w(components.size(), 1.0 / static_cast<double>(components.size()));
    if (all) {
      for (std::size_t i = 0; i < weights.size(); ++i) w[i] = *weights[i];
    }
    return MixtureModel(std::move(components), std::move(w));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("mixture: " + msg + " at offset " + std::to_string(pos_), 0);
  }

  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool starts_number() const {
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+';
  }

  double parse_number() {
    // from_chars rejects a leading '+'
    if (pos_ < text_.size() && text_[pos_] == '+') ++pos_;
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr == begin) fail("expected a number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  double parse_weight() {
    double w = parse_number();
    if (accept('/')) {
      const double d = parse_number();
      if (d == 0.0) fail("division by zero in weight");
      w /= d;
    }
    return w;
  }

  Component parse_component() {
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      name.push_back(text_[pos_++]);
    }
    if (name.empty()) fail("expected a distribution name");
    expect('(');
    std::vector<double> args;
    if (!accept(')')) {
      do {
        args.push_back(parse_number());
      } while (accept(','));
      expect(')');
    }

    auto arity = [&](std::size_t k) {
      if (args.size() != k) {
        fail(name + " takes " + std::to_string(k) + " argument" + (k == 1 ? "" : "s"));
      }
    };
    if (name == "normal" || name == "n" || name == "norm") {
      arity(2);
      return Component(Normal{args[0], args[1]});
    }
    if (name == "student_t" || name == "t") {
      arity(2);
      return Component(StudentT{args[0], args[1]});
    }
    if (name == "laplace" || name == "dexp") {
      arity(2);
      return Component(Laplace{args[0], args[1]});
    }
    if (name == "beta") {
      arity(2);
      return Component(Beta{args[0], args[1]});
    }
    if (name == "chi_square" || name == "chisq" || name == "chi2") {
      arity(1);
      return Component(ChiSquare{args[0]});
    }
    fail("unknown distribution '" + name + "'");
  }

  std::string text_;
  std::size_t pos_ = 0;
};

}  // namespace

MixtureModel parse_mixture(std::string_view text) { return Parser(text).parse(); }

std::vector<MixtureModel> parse_product(std::string_view text) {
  std::vector<MixtureModel> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t stop = text.find(';', start);
    out.push_back(parse_mixture(text.substr(start, stop == std::string_view::npos ? stop : stop - start)));
    if (stop == std::string_view::npos) break;
    start = stop + 1;
  }
  return out;
}

}  // namespace fusionclust
