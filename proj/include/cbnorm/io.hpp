#pragma once

#include <string>
#include <vector>

#include "cbnorm/channels.hpp"
#include "cbnorm/complex_matrix.hpp"

namespace cbnorm {

class ParseError : public Error {
  public:
    ParseError(const std::string& what, int line) : Error(what), line_(line) {}
    int line() const { return line_; }  // 1-based; 0 when no position applies

  private:
    int line_ = 0;
};

/// Parsed problem input. The document is an object with "kind", a "dims"
/// object and a "matrices" object. kind is one of "density-pair"
/// (matrices = {P, Q}, both n x n), "stinespring" (matrices = {A0, A1},
/// both (m*k) x n) or "choi" (matrices = {J}, (m*n) x (m*n)). Matrix
/// entries are two-element [re, im] arrays, rows outermost.
struct InputDocument {
    std::string kind;
    int n = 0;
    int m = 0;
    int k = 0;
    std::vector<ComplexMatrix> matrices;

    ChannelRep to_channel() const;  // stinespring / choi kinds only
};

InputDocument parse_input(const std::string& text, const std::string& origin);
InputDocument load_input(const std::string& path);

}  // namespace cbnorm
