#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pipeforge {

// Pipeline expression language:
//   expr  := union ("|>" union)*
//   union := atom ("+" atom)*
//   atom  := IDENT | "(" expr ")"
// `+` (feature union) binds tighter than `|>` (application order), the
// opposite of arithmetic intuition: `a + b |> c` pipes the union of a and b
// into c. Both operators are left-associative and flatten into n-ary nodes.

struct ParseError : std::runtime_error {
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error(msg + " at byte " + std::to_string(pos)), position(pos) {}
    std::size_t position;
};

enum class TokenKind { Ident, PipeOp, PlusOp, LParen, RParen, End };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t position;  // byte offset into the source
};

std::vector<Token> tokenize(std::string_view source);

class ExprAst {
public:
    enum class Kind { Name, Pipe, Union };

    static ExprAst name(std::string ident);
    static ExprAst pipe(std::vector<ExprAst> children);    // splices nested Pipes
    static ExprAst union_of(std::vector<ExprAst> children);  // splices nested Unions

    Kind kind() const { return kind_; }
    const std::string& ident() const { return ident_; }
    const std::vector<ExprAst>& children() const { return children_; }

    bool operator==(const ExprAst& other) const;

private:
    Kind kind_ = Kind::Name;
    std::string ident_;
    std::vector<ExprAst> children_;
};

ExprAst parse(std::string_view source);

// Canonical text: Pipe children joined by " |> ", Union children by " + ";
// a Pipe child of a Union is parenthesized, nothing else is. parse(render(a))
// reproduces a; render(parse(s)) is a fixpoint of parse.
std::string render(const ExprAst& ast);

// number of Name leaves equal to "noop"
int noop_count(const ExprAst& ast);

}  // namespace pipeforge
