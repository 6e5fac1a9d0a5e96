#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace grs {

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

struct EvalError : std::runtime_error {
    EvalError(const std::string& what, std::size_t offset)
        : std::runtime_error(what + " (expression offset " + std::to_string(offset) + ")"),
          offset(offset) {}
    std::size_t offset;
};

// Closed-form scalar expression over x1..xN.  Immutable after parse;
// evaluation is pure, so concurrent use is fine.
class Expr {
  public:
    // Grammar: expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
    // factor := '-' factor | atom ['^' integer];
    // atom := number | 'x'digits | func '(' expr ')' | '(' expr ')';
    // func in {sin, cos, exp, ln, sqrt}.
    static Expr parse(const std::string& text, int dimension);
    static Expr constant(double c);

    double eval(const std::vector<double>& point) const;
    // Exact first partials via dual numbers, no finite differencing.
    void eval_with_gradient(const std::vector<double>& point, double& value,
                            std::vector<double>& gradient) const;

    std::string to_string() const;
    int dimension() const { return dim_; }
    bool is_zero_literal() const;

  private:
    enum class Kind : unsigned char {
        Constant, Variable, Neg, Sin, Cos, Exp, Ln, Sqrt, Add, Sub, Mul, Div, Pow
    };
    struct Node {
        Kind kind;
        int a = -1, b = -1;     // child indices
        double value = 0.0;     // Constant
        int var = 0;            // Variable (1-based)
        long exponent = 0;      // Pow
        std::size_t offset = 0; // source byte offset, for error reports
    };
    std::vector<Node> nodes_;
    int root_ = -1;
    int dim_ = 0;

    template <typename Scalar> Scalar eval_node(int idx, const std::vector<Scalar>& vars) const;
    void print_node(int idx, std::string& out, int parent_prec) const;
    friend class Parser;
};

} // namespace grs
