#pragma once

#include <array>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ss2d/world.hpp"

namespace ss2d::predictor {

enum class Activation { Relu, Linear, Tanh, Sigmoid };

std::string_view to_string(Activation act);

struct DenseLayer {
  int in_dim = 0;
  int out_dim = 0;
  Activation activation = Activation::Linear;
  std::vector<double> weights;  // in_dim x out_dim, input-major
  std::vector<double> bias;     // out_dim

  double weight(int in, int out) const { return weights[static_cast<std::size_t>(in * out_dim + out)]; }
};

struct Network {
  std::vector<DenseLayer> layers;

  int input_dim() const { return layers.empty() ? 0 : layers.front().in_dim; }
  int output_dim() const { return layers.empty() ? 0 : layers.back().out_dim; }
};

enum class ParseErrorKind {
  BadMagic,           // first line is not "CYRUS-DNN 1"
  BadHeader,          // malformed "layers"/"layer" lines, unknown activation
  DimensionMismatch,  // consecutive layer dims do not chain
  NonNumeric,         // a value token that is not a finite decimal
  Truncated,          // stream ended early
  TrailingData,       // tokens after the last layer
};

std::string_view to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
 public:
  ParseError(ParseErrorKind kind, int line, const std::string& detail);
  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }

 private:
  ParseErrorKind kind_;
  int line_;
};

/// Parses the plain-text weight format:
///
///   CYRUS-DNN 1
///   layers <L>
///   layer <i> dense <in> <out> <activation>
///   <in rows of <out> values>   weight matrix, input-major
///   <1 row of <out> values>     bias
///
/// Whitespace separated; `#` starts a comment; LF and CRLF accepted.
Network load_network(std::istream& in);
Network load_network_file(const std::string& path);

/// Writes the same format with 17 significant digits.
void save_network(std::ostream& out, const Network& net);

/// Dense forward pass. Throws std::domain_error on input length mismatch.
std::vector<double> forward(const Network& net, const std::vector<double>& input);

inline constexpr int kInputDim = 9;
inline constexpr double kBlockerRadius = 10.0;

/// Actor-centric encoding: translate to the actor, rotate actor body to 0.
/// Layout: ball rel x,y; ball vel x,y; blocker rel x,y; blocker vel x,y;
/// blocker body relative to actor body (degrees).
std::array<double, kInputDim> make_input(const PlayerState& actor, const BallState& ball,
                                         const PlayerState& blocker);

/// One-cycle opponent position predictor: a loaded network or the
/// constant-velocity fallback. Immutable and safe to share across threads.
class OpponentPredictor {
 public:
  static OpponentPredictor fallback() { return OpponentPredictor(nullptr); }
  static OpponentPredictor with_network(std::shared_ptr<const Network> net);

  bool uses_network() const { return net_ != nullptr; }
  const Network* network() const { return net_.get(); }

 private:
  explicit OpponentPredictor(std::shared_ptr<const Network> net) : net_(std::move(net)) {}
  std::shared_ptr<const Network> net_;
};

/// Global-frame position of `blocker` one cycle ahead. The network path
/// requires the blocker within 10 m of the ball (std::domain_error
/// otherwise); the fallback returns pos + vel.
Vec2 predict_opponent(const OpponentPredictor& predictor, const PlayerState& actor, const BallState& ball,
                      const ObservedPlayer& blocker);

}  // namespace ss2d::predictor
