#include "pipeforge/expr.hpp"

namespace pipeforge {

namespace {

bool ident_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_';
}
bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }

}  // namespace

std::vector<Token> tokenize(std::string_view source) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    const std::size_t n = source.size();
    while (i < n) {
        char c = source[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++i;
            continue;
        }
        if (ident_start(c)) {
            std::size_t start = i;
            while (i < n && ident_char(source[i])) ++i;
            tokens.push_back({TokenKind::Ident, std::string(source.substr(start, i - start)), start});
            continue;
        }
        if (c == '|') {
            if (i + 1 < n && source[i + 1] == '>') {
                tokens.push_back({TokenKind::PipeOp, "|>", i});
                i += 2;
                continue;
            }
            throw ParseError("expected '|>'", i);
        }
        if (c == '+') {
            tokens.push_back({TokenKind::PlusOp, "+", i});
            ++i;
            continue;
        }
        if (c == '(') {
            tokens.push_back({TokenKind::LParen, "(", i});
            ++i;
            continue;
        }
        if (c == ')') {
            tokens.push_back({TokenKind::RParen, ")", i});
            ++i;
            continue;
        }
        throw ParseError(std::string("unknown character '") + c + "'", i);
    }
    tokens.push_back({TokenKind::End, "", n});
    return tokens;
}

ExprAst ExprAst::name(std::string ident) {
    ExprAst a;
    a.kind_ = Kind::Name;
    a.ident_ = std::move(ident);
    return a;
}

ExprAst ExprAst::pipe(std::vector<ExprAst> children) {
    std::vector<ExprAst> flat;
    for (auto& c : children) {
        if (c.kind_ == Kind::Pipe) {
            for (auto& g : c.children_) flat.push_back(std::move(g));
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.size() == 1) return std::move(flat.front());
    ExprAst a;
    a.kind_ = Kind::Pipe;
    a.children_ = std::move(flat);
    return a;
}

ExprAst ExprAst::union_of(std::vector<ExprAst> children) {
    std::vector<ExprAst> flat;
    for (auto& c : children) {
        if (c.kind_ == Kind::Union) {
            for (auto& g : c.children_) flat.push_back(std::move(g));
        } else {
            flat.push_back(std::move(c));
        }
    }
    if (flat.size() == 1) return std::move(flat.front());
    ExprAst a;
    a.kind_ = Kind::Union;
    a.children_ = std::move(flat);
    return a;
}

bool ExprAst::operator==(const ExprAst& other) const {
    if (kind_ != other.kind_) return false;
    if (kind_ == Kind::Name) return ident_ == other.ident_;
    return children_ == other.children_;
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view source) : tokens_(tokenize(source)) {}

    ExprAst run() {
        ExprAst e = parse_expr();
        if (peek().kind != TokenKind::End) throw ParseError("unexpected '" + peek().text + "'", peek().position);
        return e;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    Token consume() { return tokens_[pos_++]; }

    ExprAst parse_expr() {
        std::vector<ExprAst> parts;
        parts.push_back(parse_union());
        while (peek().kind == TokenKind::PipeOp) {
            consume();
            parts.push_back(parse_union());
        }
        return ExprAst::pipe(std::move(parts));
    }

    ExprAst parse_union() {
        std::vector<ExprAst> parts;
        parts.push_back(parse_atom());
        while (peek().kind == TokenKind::PlusOp) {
            consume();
            parts.push_back(parse_atom());
        }
        return ExprAst::union_of(std::move(parts));
    }

    ExprAst parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
            case TokenKind::Ident:
                return ExprAst::name(consume().text);
            case TokenKind::LParen: {
                Token open = consume();
                if (peek().kind == TokenKind::RParen)
                    throw ParseError("empty parentheses", open.position);
                ExprAst inner = parse_expr();
                if (peek().kind != TokenKind::RParen)
                    throw ParseError("unbalanced parentheses", open.position);
                consume();
                return inner;
            }
            case TokenKind::RParen:
                throw ParseError("unbalanced parentheses", t.position);
            case TokenKind::PipeOp:
            case TokenKind::PlusOp:
                throw ParseError("dangling operator '" + t.text + "'", t.position);
            case TokenKind::End:
                throw ParseError("dangling operator at end of input", t.position);
        }
        throw ParseError("unexpected token", t.position);
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
};

void render_node(const ExprAst& ast, bool parenthesize_pipe, std::string& out) {
    switch (ast.kind()) {
        case ExprAst::Kind::Name:
            out += ast.ident();
            return;
        case ExprAst::Kind::Pipe: {
            if (parenthesize_pipe) out += '(';
            bool first = true;
            for (const auto& c : ast.children()) {
                if (!first) out += " |> ";
                first = false;
                render_node(c, false, out);
            }
            if (parenthesize_pipe) out += ')';
            return;
        }
        case ExprAst::Kind::Union: {
            bool first = true;
            for (const auto& c : ast.children()) {
                if (!first) out += " + ";
                first = false;
                // `+` binds tighter than `|>`, so only Pipe children need parens
                render_node(c, c.kind() == ExprAst::Kind::Pipe, out);
            }
            return;
        }
    }
}

}  // namespace

ExprAst parse(std::string_view source) {
    if (source.empty()) throw ParseError("empty expression", 0);
    return Parser(source).run();
}

std::string render(const ExprAst& ast) {
    std::string out;
    render_node(ast, false, out);
    return out;
}

int noop_count(const ExprAst& ast) {
    if (ast.kind() == ExprAst::Kind::Name) return ast.ident() == "noop" ? 1 : 0;
    int n = 0;
    for (const auto& c : ast.children()) n += noop_count(c);
    return n;
}

}  // namespace pipeforge
