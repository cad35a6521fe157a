#include "memf/instance_io.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace memf {

namespace {

struct Token {
  std::string text;
  int line;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> tokens;
  int line = 1;
  std::string current;
  bool in_comment = false;
  auto flush = [&]() {
    if (!current.empty()) {
      tokens.push_back({current, line});
      current.clear();
    }
  };
  for (char c : text) {
    if (c == '\n') {
      flush();
      in_comment = false;
      ++line;
    } else if (in_comment) {
      // skip
    } else if (c == '#') {
      flush();
      in_comment = true;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      flush();
    } else {
      current += c;
    }
  }
  flush();
  return tokens;
}

class TokenReader {
 public:
  explicit TokenReader(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  bool done() const { return pos_ >= tokens_.size(); }
  int line() const {
    if (pos_ < tokens_.size()) return tokens_[pos_].line;
    return tokens_.empty() ? 1 : tokens_.back().line;
  }

  std::string word(const char* what) {
    if (done()) {
      throw InvalidArgumentError("line " + std::to_string(line()) + ": expected " + what +
                                 ", got end of input");
    }
    return tokens_[pos_++].text;
  }

  Value integer(const char* what) {
    std::string w = word(what);
    Value v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw InvalidArgumentError("line " + std::to_string(tokens_[pos_ - 1].line) +
                                 ": expected integer for " + what + ", got '" + w + "'");
    }
    return v;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

EnergyModel parse_instance(const std::string& text) {
  TokenReader reader(tokenize(text));
  if (reader.word("'mrf' header") != "mrf") {
    throw InvalidArgumentError("line " + std::to_string(reader.line()) +
                               ": instance must start with 'mrf <V> <E> <L>'");
  }
  Value num_vertices = reader.integer("vertex count");
  Value num_edges = reader.integer("edge count");
  Value num_labels = reader.integer("label count");
  if (num_vertices < 0 || num_edges < 0) {
    throw InvalidArgumentError("negative vertex or edge count");
  }
  if (num_labels < 2) {
    throw InvalidArgumentError("label count must be >= 2");
  }

  EnergyModel model;
  model.num_vertices = static_cast<int>(num_vertices);
  model.num_labels = static_cast<int>(num_labels);
  model.unary.assign(model.num_vertices, {});

  std::vector<bool> have_unary(model.num_vertices, false);
  for (Value n = 0; n < num_vertices; ++n) {
    int line = reader.line();
    if (reader.word("'unary'") != "unary") {
      throw InvalidArgumentError("line " + std::to_string(line) + ": expected 'unary' line");
    }
    Value v = reader.integer("vertex index");
    if (v < 0 || v >= num_vertices) {
      throw InvalidArgumentError("line " + std::to_string(line) + ": vertex index out of range");
    }
    if (have_unary[v]) {
      throw InvalidArgumentError("line " + std::to_string(line) + ": duplicate unary for vertex " +
                                 std::to_string(v));
    }
    have_unary[v] = true;
    model.unary[v].resize(model.num_labels);
    for (int lam = 0; lam < model.num_labels; ++lam) {
      model.unary[v][lam] = reader.integer("unary value");
    }
  }

  for (Value n = 0; n < num_edges; ++n) {
    int line = reader.line();
    if (reader.word("'edge'") != "edge") {
      throw InvalidArgumentError("line " + std::to_string(line) + ": expected 'edge' line");
    }
    GridEdge edge;
    edge.i = static_cast<int>(reader.integer("edge endpoint"));
    edge.j = static_cast<int>(reader.integer("edge endpoint"));
    std::string kind = reader.word("'table' or 'fn'");
    if (kind == "table") {
      std::vector<Value> values(static_cast<std::size_t>(model.num_labels) * model.num_labels);
      for (Value& v : values) v = reader.integer("table entry");
      model.pairwise.push_back(PairwiseSpec::table(std::move(values)));
    } else if (kind == "fn") {
      Value weight = reader.integer("regularizer weight");
      std::string reg = reader.word("regularizer kind");
      if (reg == "linear") {
        model.pairwise.push_back(PairwiseSpec::fn(weight, Regularizer::kLinear));
      } else if (reg == "quadratic") {
        model.pairwise.push_back(PairwiseSpec::fn(weight, Regularizer::kQuadratic));
      } else if (reg == "huber") {
        Value delta = reader.integer("huber delta");
        model.pairwise.push_back(PairwiseSpec::fn(weight, Regularizer::kHuber, delta));
      } else {
        throw InvalidArgumentError("line " + std::to_string(line) + ": unknown regularizer '" +
                                   reg + "'");
      }
    } else {
      throw InvalidArgumentError("line " + std::to_string(line) +
                                 ": edge kind must be 'table' or 'fn', got '" + kind + "'");
    }
    model.edges.push_back(edge);
  }

  if (!reader.done()) {
    throw InvalidArgumentError("line " + std::to_string(reader.line()) +
                               ": unexpected trailing input");
  }
  validate_model(model);
  return model;
}

std::string serialize_instance(const EnergyModel& model) {
  std::ostringstream out;
  out << "mrf " << model.num_vertices << ' ' << model.edges.size() << ' ' << model.num_labels
      << '\n';
  for (int v = 0; v < model.num_vertices; ++v) {
    out << "unary " << v;
    for (Value x : model.unary[v]) out << ' ' << x;
    out << '\n';
  }
  for (std::size_t e = 0; e < model.edges.size(); ++e) {
    out << "edge " << model.edges[e].i << ' ' << model.edges[e].j;
    const PairwiseSpec& spec = model.pairwise[e];
    if (spec.is_table) {
      out << " table";
      for (Value x : spec.values) out << ' ' << x;
    } else {
      out << " fn " << spec.weight << ' ';
      switch (spec.kind) {
        case Regularizer::kLinear:
          out << "linear";
          break;
        case Regularizer::kQuadratic:
          out << "quadratic";
          break;
        case Regularizer::kHuber:
          out << "huber " << spec.huber_delta;
          break;
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace memf
