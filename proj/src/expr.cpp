#include "expr.hpp"

#include <cctype>
#include <cmath>

namespace grs {

namespace {

// Forward-mode dual number carrying the full gradient.
struct Dual {
    double v = 0.0;
    std::vector<double> d;

    explicit Dual(std::size_t n) : d(n, 0.0) {}
    Dual(double value, std::size_t n) : v(value), d(n, 0.0) {}
};

Dual operator+(const Dual& a, const Dual& b) {
    Dual r(a.v + b.v, a.d.size());
    for (std::size_t k = 0; k < r.d.size(); ++k) r.d[k] = a.d[k] + b.d[k];
    return r;
}
Dual operator-(const Dual& a, const Dual& b) {
    Dual r(a.v - b.v, a.d.size());
    for (std::size_t k = 0; k < r.d.size(); ++k) r.d[k] = a.d[k] - b.d[k];
    return r;
}
Dual operator-(const Dual& a) {
    Dual r(-a.v, a.d.size());
    for (std::size_t k = 0; k < r.d.size(); ++k) r.d[k] = -a.d[k];
    return r;
}
Dual operator*(const Dual& a, const Dual& b) {
    Dual r(a.v * b.v, a.d.size());
    for (std::size_t k = 0; k < r.d.size(); ++k) r.d[k] = a.d[k] * b.v + a.v * b.d[k];
    return r;
}
// chain(f(u), f'(u)) applied to u
Dual chain(const Dual& u, double fv, double fpv) {
    Dual r(fv, u.d.size());
    for (std::size_t k = 0; k < r.d.size(); ++k) r.d[k] = fpv * u.d[k];
    return r;
}

double ipow(double base, long n) {
    bool inv = n < 0;
    unsigned long e = inv ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    double r = 1.0, b = base;
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return inv ? 1.0 / r : r;
}

} // namespace

class Parser {
  public:
    Parser(const std::string& text, int dim, Expr& out)
        : text_(text), dim_(dim), out_(out) {}

    void run() {
        out_.dim_ = dim_;
        out_.root_ = parse_expr();
        skip_ws();
        if (pos_ < text_.size())
            throw ParseError("unexpected trailing input", pos_);
        if (out_.root_ < 0)
            throw ParseError("empty expression", 0);
    }

  private:
    const std::string& text_;
    int dim_;
    Expr& out_;
    std::size_t pos_ = 0;

    using Kind = Expr::Kind;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }
    void expect(char c) {
        if (!accept(c))
            throw ParseError(std::string("expected '") + c + "'", pos_);
    }

    int add(Expr::Node n) {
        out_.nodes_.push_back(n);
        return static_cast<int>(out_.nodes_.size() - 1);
    }

    int parse_expr() {
        int lhs = parse_term();
        for (;;) {
            std::size_t at = pos_;
            if (accept('+')) {
                int rhs = parse_term();
                lhs = add({Kind::Add, lhs, rhs, 0, 0, 0, at});
            } else if (accept('-')) {
                int rhs = parse_term();
                lhs = add({Kind::Sub, lhs, rhs, 0, 0, 0, at});
            } else {
                return lhs;
            }
        }
    }

    int parse_term() {
        int lhs = parse_factor();
        for (;;) {
            std::size_t at = pos_;
            if (accept('*')) {
                int rhs = parse_factor();
                lhs = add({Kind::Mul, lhs, rhs, 0, 0, 0, at});
            } else if (accept('/')) {
                int rhs = parse_factor();
                lhs = add({Kind::Div, lhs, rhs, 0, 0, 0, at});
            } else {
                return lhs;
            }
        }
    }

    int parse_factor() {
        skip_ws();
        std::size_t at = pos_;
        if (accept('-')) {
            int inner = parse_factor();
            return add({Kind::Neg, inner, -1, 0, 0, 0, at});
        }
        int base = parse_atom();
        if (accept('^')) {
            std::size_t eat = pos_;
            long e = parse_integer();
            return add({Kind::Pow, base, -1, 0, 0, e, eat});
        }
        return base;
    }

    long parse_integer() {
        skip_ws();
        std::size_t at = pos_;
        bool neg = accept('-');
        skip_ws();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            throw ParseError("expected integer exponent", pos_);
        long v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            v = v * 10 + (text_[pos_] - '0');
            if (v > 1000000)
                throw ParseError("exponent too large", at);
            ++pos_;
        }
        return neg ? -v : v;
    }

    int parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            throw ParseError("unexpected end of input", pos_);
        std::size_t at = pos_;
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t end = 0;
            double v;
            try {
                v = std::stod(text_.substr(pos_), &end);
            } catch (const std::exception&) {
                throw ParseError("malformed number", at);
            }
            pos_ += end;
            return add({Kind::Constant, -1, -1, v, 0, 0, at});
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string ident;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ident += text_[pos_++];
            if (ident.size() >= 2 && ident[0] == 'x' &&
                std::isdigit(static_cast<unsigned char>(ident[1]))) {
                int idx = 0;
                for (std::size_t k = 1; k < ident.size(); ++k) {
                    if (!std::isdigit(static_cast<unsigned char>(ident[k])))
                        throw ParseError("unknown identifier '" + ident + "'", at);
                    idx = idx * 10 + (ident[k] - '0');
                }
                if (idx < 1 || idx > dim_)
                    throw ParseError("variable index out of range 1.." + std::to_string(dim_) +
                                         ": '" + ident + "'",
                                     at);
                return add({Kind::Variable, -1, -1, 0, idx, 0, at});
            }
            Kind fk;
            if (ident == "sin") fk = Kind::Sin;
            else if (ident == "cos") fk = Kind::Cos;
            else if (ident == "exp") fk = Kind::Exp;
            else if (ident == "ln") fk = Kind::Ln;
            else if (ident == "sqrt") fk = Kind::Sqrt;
            else throw ParseError("unknown identifier '" + ident + "'", at);
            expect('(');
            int inner = parse_expr();
            expect(')');
            return add({fk, inner, -1, 0, 0, 0, at});
        }
        if (accept('(')) {
            int inner = parse_expr();
            expect(')');
            return inner;
        }
        throw ParseError("unexpected character", pos_);
    }
};

Expr Expr::parse(const std::string& text, int dimension) {
    if (dimension < 1)
        throw ParseError("dimension must be positive", 0);
    Expr e;
    Parser p(text, dimension, e);
    p.run();
    return e;
}

Expr Expr::constant(double c) {
    Expr e;
    e.dim_ = 0;
    e.nodes_.push_back({Kind::Constant, -1, -1, c, 0, 0, 0});
    e.root_ = 0;
    return e;
}

bool Expr::is_zero_literal() const {
    return nodes_.size() == 1 && nodes_[0].kind == Kind::Constant && nodes_[0].value == 0.0;
}

namespace {
double val_of(double x) { return x; }
double val_of(const Dual& x) { return x.v; }
} // namespace

template <typename Scalar>
Scalar Expr::eval_node(int idx, const std::vector<Scalar>& vars) const {
    const Node& n = nodes_[idx];
    switch (n.kind) {
    case Kind::Constant:
        if constexpr (std::is_same_v<Scalar, double>) return n.value;
        else return Dual(n.value, vars.empty() ? 0 : vars[0].d.size());
    case Kind::Variable:
        return vars[static_cast<std::size_t>(n.var - 1)];
    case Kind::Neg:
        return -eval_node<Scalar>(n.a, vars);
    case Kind::Add:
        return eval_node<Scalar>(n.a, vars) + eval_node<Scalar>(n.b, vars);
    case Kind::Sub:
        return eval_node<Scalar>(n.a, vars) - eval_node<Scalar>(n.b, vars);
    case Kind::Mul:
        return eval_node<Scalar>(n.a, vars) * eval_node<Scalar>(n.b, vars);
    case Kind::Div: {
        Scalar num = eval_node<Scalar>(n.a, vars);
        Scalar den = eval_node<Scalar>(n.b, vars);
        if (val_of(den) == 0.0)
            throw EvalError("division by zero", n.offset);
        if constexpr (std::is_same_v<Scalar, double>) {
            return num / den;
        } else {
            Dual r(num.v / den.v, num.d.size());
            for (std::size_t k = 0; k < r.d.size(); ++k)
                r.d[k] = (num.d[k] * den.v - num.v * den.d[k]) / (den.v * den.v);
            return r;
        }
    }
    case Kind::Pow: {
        Scalar base = eval_node<Scalar>(n.a, vars);
        if (n.exponent < 0 && val_of(base) == 0.0)
            throw EvalError("zero raised to a negative power", n.offset);
        if constexpr (std::is_same_v<Scalar, double>) {
            return ipow(base, n.exponent);
        } else {
            double bv = base.v;
            double fv = ipow(bv, n.exponent);
            double fpv = n.exponent == 0 ? 0.0
                                         : static_cast<double>(n.exponent) * ipow(bv, n.exponent - 1);
            return chain(base, fv, fpv);
        }
    }
    case Kind::Sin: {
        Scalar u = eval_node<Scalar>(n.a, vars);
        if constexpr (std::is_same_v<Scalar, double>) return std::sin(u);
        else return chain(u, std::sin(u.v), std::cos(u.v));
    }
    case Kind::Cos: {
        Scalar u = eval_node<Scalar>(n.a, vars);
        if constexpr (std::is_same_v<Scalar, double>) return std::cos(u);
        else return chain(u, std::cos(u.v), -std::sin(u.v));
    }
    case Kind::Exp: {
        Scalar u = eval_node<Scalar>(n.a, vars);
        if constexpr (std::is_same_v<Scalar, double>) return std::exp(u);
        else {
            double e = std::exp(u.v);
            return chain(u, e, e);
        }
    }
    case Kind::Ln: {
        Scalar u = eval_node<Scalar>(n.a, vars);
        if (val_of(u) <= 0.0)
            throw EvalError("ln of non-positive value", n.offset);
        if constexpr (std::is_same_v<Scalar, double>) return std::log(u);
        else return chain(u, std::log(u.v), 1.0 / u.v);
    }
    case Kind::Sqrt: {
        Scalar u = eval_node<Scalar>(n.a, vars);
        if (val_of(u) < 0.0)
            throw EvalError("sqrt of negative value", n.offset);
        if constexpr (std::is_same_v<Scalar, double>) {
            return std::sqrt(u);
        } else {
            if (u.v == 0.0)
                throw EvalError("sqrt derivative at zero", n.offset);
            double s = std::sqrt(u.v);
            return chain(u, s, 0.5 / s);
        }
    }
    }
    throw EvalError("corrupt expression node", 0);
}

double Expr::eval(const std::vector<double>& point) const {
    return eval_node<double>(root_, point);
}

void Expr::eval_with_gradient(const std::vector<double>& point, double& value,
                              std::vector<double>& gradient) const {
    std::size_t n = point.size();
    std::vector<Dual> vars;
    vars.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        Dual d(point[k], n);
        d.d[k] = 1.0;
        vars.push_back(std::move(d));
    }
    Dual r = eval_node<Dual>(root_, vars);
    value = r.v;
    gradient = std::move(r.d);
}

// Precedence levels for printing: 0 add, 1 mul, 2 unary minus, 3 pow/atom.
void Expr::print_node(int idx, std::string& out, int parent_prec) const {
    const Node& n = nodes_[idx];
    auto paren = [&](int prec, auto&& body) {
        bool need = prec < parent_prec;
        if (need) out += '(';
        body();
        if (need) out += ')';
    };
    switch (n.kind) {
    case Kind::Constant: {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", n.value);
        if (n.value < 0) {
            paren(2, [&] { out += buf; });
        } else {
            out += buf;
        }
        break;
    }
    case Kind::Variable:
        out += 'x' + std::to_string(n.var);
        break;
    case Kind::Neg:
        paren(2, [&] {
            out += '-';
            print_node(n.a, out, 2);
        });
        break;
    case Kind::Add:
        paren(0, [&] {
            print_node(n.a, out, 0);
            out += " + ";
            print_node(n.b, out, 1);
        });
        break;
    case Kind::Sub:
        paren(0, [&] {
            print_node(n.a, out, 0);
            out += " - ";
            print_node(n.b, out, 1);
        });
        break;
    case Kind::Mul:
        paren(1, [&] {
            print_node(n.a, out, 1);
            out += "*";
            print_node(n.b, out, 2);
        });
        break;
    case Kind::Div:
        paren(1, [&] {
            print_node(n.a, out, 1);
            out += "/";
            print_node(n.b, out, 2);
        });
        break;
    case Kind::Pow:
        paren(3, [&] {
            print_node(n.a, out, 4);
            out += '^';
            out += std::to_string(n.exponent);
        });
        break;
    case Kind::Sin: case Kind::Cos: case Kind::Exp: case Kind::Ln: case Kind::Sqrt: {
        const char* name = n.kind == Kind::Sin   ? "sin"
                           : n.kind == Kind::Cos ? "cos"
                           : n.kind == Kind::Exp ? "exp"
                           : n.kind == Kind::Ln  ? "ln"
                                                 : "sqrt";
        out += name;
        out += '(';
        print_node(n.a, out, 0);
        out += ')';
        break;
    }
    }
}

std::string Expr::to_string() const {
    std::string out;
    print_node(root_, out, 0);
    return out;
}

} // namespace grs
