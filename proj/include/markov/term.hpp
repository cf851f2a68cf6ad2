#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "markov/diagram.hpp"

namespace markov {

struct SourceLoc {
    int line = 0;
    int col = 0;
};

class BuildError : public Error {
public:
    BuildError(const std::string& msg, SourceLoc loc)
        : Error(std::to_string(loc.line) + ":" + std::to_string(loc.col) + ": " + msg), loc(loc) {}
    SourceLoc loc;
};

/// Abstract syntax of diagram expressions: structural generators, named
/// boxes or diagrams, sequential (;) and parallel (*) composition.
struct Term {
    enum class Kind { Id, Swap, Copy, Del, Name, Seq, Par };

    Kind kind;
    std::vector<std::string> types_a;  // Id/Copy/Del operand, Swap first operand
    std::vector<std::string> types_b;  // Swap second operand
    std::string name;                  // Name
    std::shared_ptr<const Term> lhs, rhs;
    SourceLoc loc;
};

using TermPtr = std::shared_ptr<const Term>;

TermPtr term_id(std::vector<std::string> types, SourceLoc loc = {});
TermPtr term_swap(std::vector<std::string> a, std::vector<std::string> b, SourceLoc loc = {});
TermPtr term_copy(std::vector<std::string> types, SourceLoc loc = {});
TermPtr term_del(std::vector<std::string> types, SourceLoc loc = {});
TermPtr term_name(std::string name, SourceLoc loc = {});
TermPtr term_seq(TermPtr lhs, TermPtr rhs, SourceLoc loc = {});
TermPtr term_par(TermPtr lhs, TermPtr rhs, SourceLoc loc = {});

/// Elaborates a term to a normalized diagram. Named boxes resolve through
/// the signature; `named` supplies previously defined diagrams. Type errors
/// carry the offending term's source location.
Diagram build_from_term(const Term& term, SignaturePtr sig,
                        const std::map<std::string, Diagram>& named = {});

/// Prints a term in the concrete syntax (re-parseable).
std::string term_to_text(const Term& term);

/// Extracts an equivalent term expression from a diagram: a composite of
/// generator and box layers whose elaboration is canonically equal to `d`.
std::string diagram_to_term_text(const Diagram& d);

}  // namespace markov
