#include "markov/dsl.hpp"

#include <cctype>
#include <sstream>

namespace markov {

const Diagram& ParsedProgram::diagram(const std::string& name) const {
    auto it = diagrams.find(name);
    if (it == diagrams.end()) throw Error("no diagram named " + name);
    return it->second;
}

namespace {

enum class Tok {
    Ident,
    KwType,
    KwBox,
    KwDiag,
    KwId,
    KwSwap,
    KwCopy,
    KwDel,
    KwI,
    Semi,
    Colon,
    Eq,
    Arrow,
    Star,
    LParen,
    RParen,
    Comma,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) { advance(); }

    const Token& peek() const { return current_; }
    Token next() {
        Token t = current_;
        advance();
        return t;
    }

private:
    void advance() {
        skip_ws();
        current_.line = line_;
        current_.col = col_;
        if (pos_ >= src_.size()) {
            current_.kind = Tok::End;
            current_.text = "<end of input>";
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                          src_[pos_] == '_' || src_[pos_] == '\''))
                bump();
            current_.text = std::string(src_.substr(start, pos_ - start));
            if (current_.text == "type") current_.kind = Tok::KwType;
            else if (current_.text == "box") current_.kind = Tok::KwBox;
            else if (current_.text == "diag") current_.kind = Tok::KwDiag;
            else if (current_.text == "id") current_.kind = Tok::KwId;
            else if (current_.text == "swap") current_.kind = Tok::KwSwap;
            else if (current_.text == "copy") current_.kind = Tok::KwCopy;
            else if (current_.text == "del") current_.kind = Tok::KwDel;
            else if (current_.text == "I") current_.kind = Tok::KwI;
            else current_.kind = Tok::Ident;
            return;
        }
        if (c == '-' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            bump();
            bump();
            current_.kind = Tok::Arrow;
            current_.text = "->";
            return;
        }
        bump();
        current_.text = std::string(1, c);
        switch (c) {
            case ';': current_.kind = Tok::Semi; return;
            case ':': current_.kind = Tok::Colon; return;
            case '=': current_.kind = Tok::Eq; return;
            case '*': current_.kind = Tok::Star; return;
            case '(': current_.kind = Tok::LParen; return;
            case ')': current_.kind = Tok::RParen; return;
            case ',': current_.kind = Tok::Comma; return;
            default: throw ParseError("unexpected character '" + std::string(1, c) + "'", line_, col_ - 1);
        }
    }

    void skip_ws() {
        for (;;) {
            while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
            if (pos_ < src_.size() && src_[pos_] == '#') {
                while (pos_ < src_.size() && src_[pos_] != '\n') bump();
                continue;
            }
            break;
        }
    }

    void bump() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view src_;
    size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view src) : lex_(src) {}

    ParsedProgram run() {
        std::vector<std::string> type_decls;
        std::vector<BoxDecl> box_decls;
        ParsedProgram prog;
        while (lex_.peek().kind != Tok::End) {
            const Token& t = lex_.peek();
            switch (t.kind) {
                case Tok::KwType: {
                    if (prog.sig) throw ParseError("type declarations must precede diagrams", t.line, t.col);
                    lex_.next();
                    Token name = expect(Tok::Ident, "type name");
                    expect(Tok::Semi, "';'");
                    type_decls.push_back(name.text);
                    break;
                }
                case Tok::KwBox: {
                    if (prog.sig) throw ParseError("box declarations must precede diagrams", t.line, t.col);
                    lex_.next();
                    Token name = expect(Tok::Ident, "box name");
                    expect(Tok::Colon, "':'");
                    BoxDecl decl;
                    decl.name = name.text;
                    decl.inputs = typelist();
                    expect(Tok::Arrow, "'->'");
                    decl.outputs = typelist();
                    expect(Tok::Semi, "';'");
                    box_decls.push_back(std::move(decl));
                    break;
                }
                case Tok::KwDiag: {
                    if (!prog.sig) freeze(prog, type_decls, box_decls);
                    Token kw = lex_.next();
                    Token name = expect(Tok::Ident, "diagram name");
                    if (prog.diagrams.count(name.text))
                        throw ParseError("duplicate diagram name " + name.text, name.line, name.col);
                    expect(Tok::Eq, "'='");
                    TermPtr term = parse_term(prog);
                    if (lex_.peek().kind == Tok::Semi) lex_.next();
                    try {
                        Diagram d = build_from_term(*term, prog.sig, prog.diagrams);
                        prog.diagrams.emplace(name.text, std::move(d));
                        prog.order.push_back(name.text);
                        prog.terms.emplace(name.text, std::move(term));
                    } catch (const BuildError& e) {
                        throw ParseError(e.what(), kw.line, kw.col);
                    }
                    break;
                }
                default:
                    throw ParseError("expected a declaration, got '" + t.text + "'", t.line, t.col);
            }
        }
        if (!prog.sig) freeze(prog, type_decls, box_decls);
        return prog;
    }

private:
    static void freeze(ParsedProgram& prog, std::vector<std::string>& types,
                       std::vector<BoxDecl>& boxes) {
        prog.sig = std::make_shared<Signature>(std::move(types), std::move(boxes));
    }

    Token expect(Tok kind, const std::string& what) {
        const Token& t = lex_.peek();
        if (t.kind != kind) throw ParseError("expected " + what + ", got '" + t.text + "'", t.line, t.col);
        return lex_.next();
    }

    std::vector<std::string> typelist() {
        if (lex_.peek().kind == Tok::KwI) {
            lex_.next();
            return {};
        }
        std::vector<std::string> out;
        out.push_back(expect(Tok::Ident, "type name").text);
        while (lex_.peek().kind == Tok::Star) {
            lex_.next();
            out.push_back(expect(Tok::Ident, "type name").text);
        }
        return out;
    }

    static bool starts_atom(Tok k) {
        return k == Tok::Ident || k == Tok::KwId || k == Tok::KwSwap || k == Tok::KwCopy ||
               k == Tok::KwDel || k == Tok::LParen;
    }

    // term := par { ";" par }. A ';' followed by something that cannot start
    // an atom instead terminates the enclosing diag statement.
    TermPtr parse_term(const ParsedProgram& prog) {
        TermPtr lhs = parse_par(prog);
        while (lex_.peek().kind == Tok::Semi) {
            Lexer save = lex_;
            Token semi = lex_.next();
            if (!starts_atom(lex_.peek().kind)) {
                lex_ = save;  // leave the ';' for the statement level
                break;
            }
            TermPtr rhs = parse_par(prog);
            lhs = term_seq(std::move(lhs), std::move(rhs), {semi.line, semi.col});
        }
        return lhs;
    }

    TermPtr parse_par(const ParsedProgram& prog) {
        TermPtr lhs = parse_atom(prog);
        while (lex_.peek().kind == Tok::Star) {
            Token star = lex_.next();
            TermPtr rhs = parse_atom(prog);
            lhs = term_par(std::move(lhs), std::move(rhs), {star.line, star.col});
        }
        return lhs;
    }

    TermPtr parse_atom(const ParsedProgram& prog) {
        const Token& t = lex_.peek();
        SourceLoc loc{t.line, t.col};
        switch (t.kind) {
            case Tok::LParen: {
                lex_.next();
                TermPtr inner = parse_term(prog);
                expect(Tok::RParen, "')'");
                return inner;
            }
            case Tok::KwId: {
                lex_.next();
                expect(Tok::LParen, "'('");
                auto types = typelist();
                expect(Tok::RParen, "')'");
                return term_id(std::move(types), loc);
            }
            case Tok::KwCopy: {
                lex_.next();
                expect(Tok::LParen, "'('");
                auto types = typelist();
                expect(Tok::RParen, "')'");
                return term_copy(std::move(types), loc);
            }
            case Tok::KwDel: {
                lex_.next();
                expect(Tok::LParen, "'('");
                auto types = typelist();
                expect(Tok::RParen, "')'");
                return term_del(std::move(types), loc);
            }
            case Tok::KwSwap: {
                lex_.next();
                expect(Tok::LParen, "'('");
                auto a = typelist();
                expect(Tok::Comma, "','");
                auto b = typelist();
                expect(Tok::RParen, "')'");
                return term_swap(std::move(a), std::move(b), loc);
            }
            case Tok::Ident: {
                Token name = lex_.next();
                return resolve_ident(prog, name);
            }
            default:
                throw ParseError("expected a term, got '" + t.text + "'", t.line, t.col);
        }
    }

    TermPtr resolve_ident(const ParsedProgram& prog, const Token& name) {
        SourceLoc loc{name.line, name.col};
        if (prog.diagrams.count(name.text) || prog.sig->box_id(name.text) >= 0)
            return term_name(name.text, loc);
        // Sugar: id_X, copy_X, del_X, swap_X_Y over underscore-free type names.
        auto is_type = [&](const std::string& s) { return prog.sig->type_id(s) >= 0; };
        auto starts_with = [&](const char* prefix) {
            return name.text.rfind(prefix, 0) == 0;
        };
        if (starts_with("id_") && is_type(name.text.substr(3)))
            return term_id({name.text.substr(3)}, loc);
        if (starts_with("copy_") && is_type(name.text.substr(5)))
            return term_copy({name.text.substr(5)}, loc);
        if (starts_with("del_") && is_type(name.text.substr(4)))
            return term_del({name.text.substr(4)}, loc);
        if (starts_with("swap_")) {
            std::string rest = name.text.substr(5);
            size_t us = rest.find('_');
            if (us != std::string::npos) {
                std::string a = rest.substr(0, us), b = rest.substr(us + 1);
                if (is_type(a) && is_type(b)) return term_swap({a}, {b}, loc);
            }
        }
        throw ParseError("unknown identifier " + name.text, name.line, name.col);
    }

    Lexer lex_;
};

}  // namespace

ParsedProgram parse_program(std::string_view source) { return Parser(source).run(); }

std::string signature_to_text(const Signature& sig) {
    std::ostringstream out;
    for (int t = 0; t < sig.type_count(); ++t) out << "type " << sig.type_name(t) << ";\n";
    for (int b = 0; b < sig.box_count(); ++b) {
        out << "box " << sig.box_name(b) << " : ";
        auto list = [&](const std::vector<TypeId>& ts) {
            if (ts.empty()) {
                out << "I";
                return;
            }
            for (size_t i = 0; i < ts.size(); ++i) {
                if (i) out << "*";
                out << sig.type_name(ts[i]);
            }
        };
        list(sig.box_inputs(b));
        out << " -> ";
        list(sig.box_outputs(b));
        out << ";\n";
    }
    return out.str();
}

}  // namespace markov
