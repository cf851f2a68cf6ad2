#pragma once

#include <string>

#include "markov/diagram.hpp"

namespace markov {

/// Renders a diagram as a DOT digraph: boxes as rectangular nodes, wires as
/// edges labelled with their type, boundary ports as rank-constrained
/// plaintext nodes. Node order comes from the canonical form, so output is
/// byte-stable across runs.
std::string to_dot(const Diagram& d, const std::string& name = "diagram");

}  // namespace markov
