#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "markov/diagram.hpp"
#include "markov/term.hpp"

namespace markov {

class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line, int col)
        : Error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
    int line, col;
};

/// A parsed source file: the declared signature plus the named diagrams in
/// declaration order, already elaborated and normalized.
struct ParsedProgram {
    SignaturePtr sig;
    std::vector<std::string> order;
    std::map<std::string, Diagram> diagrams;
    std::map<std::string, TermPtr> terms;

    const Diagram& diagram(const std::string& name) const;
};

/// Grammar ('#' starts a line comment):
///
///   program  := { decl }
///   decl     := "type" IDENT ";"
///             | "box" IDENT ":" typelist "->" typelist ";"
///             | "diag" IDENT "=" term [";"]
///   typelist := "I" | IDENT { "*" IDENT }
///   term     := par { ";" par }
///   par      := atom { "*" atom }
///   atom     := "(" term ")" | "id" "(" typelist ")" | "copy" "(" typelist ")"
///             | "del" "(" typelist ")" | "swap" "(" typelist "," typelist ")"
///             | IDENT
///
/// An IDENT atom names a box or a previously declared diagram; the sugar
/// forms id_X, copy_X, del_X, swap_X_Y resolve against underscore-free type
/// names. Type and box declarations must precede the first diagram.
ParsedProgram parse_program(std::string_view source);

/// Prints the signature as re-parseable declarations.
std::string signature_to_text(const Signature& sig);

}  // namespace markov
