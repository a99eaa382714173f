#pragma once

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>

namespace pdekit {

// ---------------------------------------------------------------------------
// Tiny arithmetic grammar for problem files:
//   + - * / ^, unary minus, parentheses, sin cos exp sqrt abs,
//   variables t x y z u p, numeric literals.
// ---------------------------------------------------------------------------
class ExprError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExprEnv {
    double t = 0, x = 0, y = 0, z = 0, u = 0, p = 0;

    double get(char name) const {
        switch (name) {
            case 't': return t;
            case 'x': return x;
            case 'y': return y;
            case 'z': return z;
            case 'u': return u;
            case 'p': return p;
        }
        throw ExprError(std::string("unknown variable: ") + name);
    }
};

class Expr {
public:
    using Node = std::function<double(const ExprEnv&)>;

    static Expr parse(const std::string& text) {
        Parser p{text, 0};
        Expr e;
        e.root_ = p.parse_sum();
        p.skip_ws();
        if (p.pos != text.size())
            throw ExprError("trailing input at position " + std::to_string(p.pos));
        return e;
    }

    double eval(const ExprEnv& env) const { return root_(env); }
    double operator()(const ExprEnv& env) const { return root_(env); }

private:
    Node root_;

    struct Parser {
        const std::string& s;
        size_t pos;

        void skip_ws() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip_ws();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }

        Node parse_sum() {
            Node lhs = parse_product();
            while (true) {
                if (eat('+')) {
                    Node rhs = parse_product();
                    lhs = [lhs, rhs](const ExprEnv& e) { return lhs(e) + rhs(e); };
                } else if (eat('-')) {
                    Node rhs = parse_product();
                    lhs = [lhs, rhs](const ExprEnv& e) { return lhs(e) - rhs(e); };
                } else {
                    return lhs;
                }
            }
        }

        Node parse_product() {
            Node lhs = parse_unary();
            while (true) {
                if (eat('*')) {
                    Node rhs = parse_unary();
                    lhs = [lhs, rhs](const ExprEnv& e) { return lhs(e) * rhs(e); };
                } else if (eat('/')) {
                    Node rhs = parse_unary();
                    lhs = [lhs, rhs](const ExprEnv& e) { return lhs(e) / rhs(e); };
                } else {
                    return lhs;
                }
            }
        }

        Node parse_unary() {
            if (eat('-')) {
                Node inner = parse_unary();
                return [inner](const ExprEnv& e) { return -inner(e); };
            }
            return parse_power();
        }

        Node parse_power() {
            Node base = parse_atom();
            if (eat('^')) {
                Node exp = parse_unary();  // right associative
                return [base, exp](const ExprEnv& e) { return std::pow(base(e), exp(e)); };
            }
            return base;
        }

        Node parse_atom() {
            skip_ws();
            if (pos >= s.size()) throw ExprError("unexpected end of expression");
            const char c = s[pos];
            if (c == '(') {
                ++pos;
                Node inner = parse_sum();
                if (!eat(')')) throw ExprError("missing ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
            if (std::isalpha(static_cast<unsigned char>(c))) return parse_name();
            throw ExprError(std::string("unexpected character: ") + c);
        }

        Node parse_number() {
            size_t end = pos;
            while (end < s.size()
                   && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.'
                       || s[end] == 'e' || s[end] == 'E'
                       || ((s[end] == '+' || s[end] == '-') && end > pos
                           && (s[end - 1] == 'e' || s[end - 1] == 'E'))))
                ++end;
            const std::string tok = s.substr(pos, end - pos);
            size_t used = 0;
            double v;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                throw ExprError("bad number: " + tok);
            }
            if (used != tok.size()) throw ExprError("bad number: " + tok);
            pos = end;
            return [v](const ExprEnv&) { return v; };
        }

        Node parse_name() {
            size_t end = pos;
            while (end < s.size() && std::isalpha(static_cast<unsigned char>(s[end]))) ++end;
            const std::string name = s.substr(pos, end - pos);
            pos = end;
            if (name.size() == 1 && std::string("txyzup").find(name[0]) != std::string::npos)
                return [c = name[0]](const ExprEnv& e) { return e.get(c); };
            static const std::map<std::string, double (*)(double)> fns = {
                {"sin", std::sin}, {"cos", std::cos}, {"exp", std::exp},
                {"sqrt", std::sqrt}, {"abs", std::fabs}};
            auto it = fns.find(name);
            if (it == fns.end()) throw ExprError("unknown name: " + name);
            if (!eat('(')) throw ExprError(name + ": expected '('");
            Node arg = parse_sum();
            if (!eat(')')) throw ExprError(name + ": missing ')'");
            return [fn = it->second, arg](const ExprEnv& e) { return fn(arg(e)); };
        }
    };
};

}  // namespace pdekit
