#include "ss2d/predictor.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>

#include "ss2d/errors.hpp"

namespace ss2d::predictor {

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::Relu: return "relu";
    case Activation::Linear: return "linear";
    case Activation::Tanh: return "tanh";
    case Activation::Sigmoid: return "sigmoid";
  }
  return "?";
}

std::string_view to_string(ParseErrorKind kind) {
  switch (kind) {
    case ParseErrorKind::BadMagic: return "bad magic";
    case ParseErrorKind::BadHeader: return "bad header";
    case ParseErrorKind::DimensionMismatch: return "dimension mismatch";
    case ParseErrorKind::NonNumeric: return "non-numeric token";
    case ParseErrorKind::Truncated: return "truncated file";
    case ParseErrorKind::TrailingData: return "trailing data";
  }
  return "?";
}

ParseError::ParseError(ParseErrorKind kind, int line, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": " + std::string(to_string(kind)) + ": " + detail),
      kind_(kind),
      line_(line) {}

namespace {

struct Token {
  std::string text;
  int line;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::istream& in) {
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
      ++line_no;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::size_t i = 0;
      while (i < raw.size()) {
        while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
        std::size_t j = i;
        while (j < raw.size() && !std::isspace(static_cast<unsigned char>(raw[j]))) ++j;
        if (j > i) tokens_.push_back({raw.substr(i, j - i), line_no});
        i = j;
      }
    }
    last_line_ = line_no;
  }

  bool done() const { return pos_ >= tokens_.size(); }
  /// Line of the most recently consumed token.
  int line() const { return pos_ > 0 ? tokens_[pos_ - 1].line : 1; }

  const Token& next(const char* expecting) {
    if (done()) {
      throw ParseError(ParseErrorKind::Truncated, last_line_, std::string("expected ") + expecting);
    }
    return tokens_[pos_++];
  }

  const Token& peek() const { return tokens_[pos_]; }

  void expect(const char* word, ParseErrorKind kind) {
    const Token& t = next(word);
    if (t.text != word) throw ParseError(kind, t.line, std::string("expected '") + word + "', got '" + t.text + "'");
  }

  int integer(const char* what) {
    const Token& t = next(what);
    int v = 0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      throw ParseError(ParseErrorKind::BadHeader, t.line, std::string("expected integer ") + what + ", got '" + t.text + "'");
    }
    return v;
  }

  double decimal(const char* what) {
    const Token& t = next(what);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size() || !std::isfinite(v)) {
      throw ParseError(ParseErrorKind::NonNumeric, t.line, std::string("bad ") + what + " '" + t.text + "'");
    }
    return v;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  int last_line_ = 0;
};

Activation parse_activation(const Token& t) {
  if (t.text == "relu") return Activation::Relu;
  if (t.text == "linear") return Activation::Linear;
  if (t.text == "tanh") return Activation::Tanh;
  if (t.text == "sigmoid") return Activation::Sigmoid;
  throw ParseError(ParseErrorKind::BadHeader, t.line, "unknown activation '" + t.text + "'");
}

double activate(Activation act, double v) {
  switch (act) {
    case Activation::Relu: return v > 0.0 ? v : 0.0;
    case Activation::Linear: return v;
    case Activation::Tanh: return std::tanh(v);
    case Activation::Sigmoid: return 1.0 / (1.0 + std::exp(-v));
  }
  return v;
}

}  // namespace

Network load_network(std::istream& in) {
  if (!in) throw IoError("cannot read weights stream");
  Tokenizer tok(in);
  if (tok.done()) throw ParseError(ParseErrorKind::Truncated, 1, "empty file");
  {
    const Token& magic = tok.next("magic");
    if (magic.text != "CYRUS-DNN") throw ParseError(ParseErrorKind::BadMagic, magic.line, "got '" + magic.text + "'");
    const Token& version = tok.next("version");
    if (version.text != "1") throw ParseError(ParseErrorKind::BadMagic, version.line, "unsupported version '" + version.text + "'");
  }
  tok.expect("layers", ParseErrorKind::BadHeader);
  const int n_layers = tok.integer("layer count");
  if (n_layers < 1) throw ParseError(ParseErrorKind::BadHeader, tok.line(), "layer count must be >= 1");

  Network net;
  for (int i = 0; i < n_layers; ++i) {
    tok.expect("layer", ParseErrorKind::BadHeader);
    const int line = tok.done() ? 0 : tok.peek().line;
    if (tok.integer("layer index") != i) {
      throw ParseError(ParseErrorKind::BadHeader, line, "layer index out of sequence, expected " + std::to_string(i));
    }
    tok.expect("dense", ParseErrorKind::BadHeader);
    DenseLayer layer;
    layer.in_dim = tok.integer("in_dim");
    layer.out_dim = tok.integer("out_dim");
    if (layer.in_dim < 1 || layer.out_dim < 1) {
      throw ParseError(ParseErrorKind::BadHeader, line, "layer dimensions must be >= 1");
    }
    if (!net.layers.empty() && net.layers.back().out_dim != layer.in_dim) {
      throw ParseError(ParseErrorKind::DimensionMismatch, line,
                       "layer " + std::to_string(i) + " in_dim " + std::to_string(layer.in_dim) +
                           " != previous out_dim " + std::to_string(net.layers.back().out_dim));
    }
    layer.activation = parse_activation(tok.next("activation"));
    layer.weights.resize(static_cast<std::size_t>(layer.in_dim) * layer.out_dim);
    for (auto& w : layer.weights) w = tok.decimal("weight");
    layer.bias.resize(static_cast<std::size_t>(layer.out_dim));
    for (auto& b : layer.bias) b = tok.decimal("bias");
    net.layers.push_back(std::move(layer));
  }
  if (!tok.done()) {
    const Token& t = tok.peek();
    throw ParseError(ParseErrorKind::TrailingData, t.line, "unexpected '" + t.text + "'");
  }
  return net;
}

Network load_network_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open weights file '" + path + "'");
  return load_network(in);
}

void save_network(std::ostream& out, const Network& net) {
  out << "CYRUS-DNN 1\n";
  out << "layers " << net.layers.size() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < net.layers.size(); ++i) {
    const DenseLayer& l = net.layers[i];
    out << "layer " << i << " dense " << l.in_dim << ' ' << l.out_dim << ' ' << to_string(l.activation) << '\n';
    for (int r = 0; r < l.in_dim; ++r) {
      for (int c = 0; c < l.out_dim; ++c) out << (c ? " " : "") << l.weight(r, c);
      out << '\n';
    }
    for (int c = 0; c < l.out_dim; ++c) out << (c ? " " : "") << l.bias[static_cast<std::size_t>(c)];
    out << '\n';
  }
}

std::vector<double> forward(const Network& net, const std::vector<double>& input) {
  if (static_cast<int>(input.size()) != net.input_dim()) {
    throw std::domain_error("network expects " + std::to_string(net.input_dim()) + " inputs, got " +
                            std::to_string(input.size()));
  }
  std::vector<double> x = input;
  for (const DenseLayer& l : net.layers) {
    std::vector<double> y(l.bias);
    for (int i = 0; i < l.in_dim; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      if (xi == 0.0) continue;
      const double* row = &l.weights[static_cast<std::size_t>(i) * l.out_dim];
      for (int j = 0; j < l.out_dim; ++j) y[static_cast<std::size_t>(j)] += xi * row[j];
    }
    for (double& v : y) v = activate(l.activation, v);
    x = std::move(y);
  }
  return x;
}

std::array<double, kInputDim> make_input(const PlayerState& actor, const BallState& ball,
                                         const PlayerState& blocker) {
  const double r = -actor.body;
  const Vec2 ball_rel = (ball.pos - actor.pos).rotated(r);
  const Vec2 ball_vel = ball.vel.rotated(r);
  const Vec2 blk_rel = (blocker.pos - actor.pos).rotated(r);
  const Vec2 blk_vel = blocker.vel.rotated(r);
  return {ball_rel.x, ball_rel.y, ball_vel.x, ball_vel.y, blk_rel.x,
          blk_rel.y,  blk_vel.x,  blk_vel.y,  normalize_angle(blocker.body - actor.body)};
}

OpponentPredictor OpponentPredictor::with_network(std::shared_ptr<const Network> net) {
  if (!net) throw std::domain_error("null network");
  if (net->input_dim() != kInputDim || net->output_dim() != 2) {
    throw std::domain_error("movement network must map 9 inputs to 2 outputs");
  }
  return OpponentPredictor(std::move(net));
}

Vec2 predict_opponent(const OpponentPredictor& predictor, const PlayerState& actor, const BallState& ball,
                      const ObservedPlayer& blocker) {
  if (!predictor.uses_network()) return blocker.base.pos + blocker.base.vel;
  if (blocker.base.pos.dist(ball.pos) > kBlockerRadius) {
    throw std::domain_error("blocker farther than 10 m from the ball");
  }
  const auto in = make_input(actor, ball, blocker.base);
  const std::vector<double> out = forward(*predictor.network(), std::vector<double>(in.begin(), in.end()));
  return actor.pos + Vec2{out[0], out[1]}.rotated(actor.body);
}

}  // namespace ss2d::predictor
