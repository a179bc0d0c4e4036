#pragma once

#include "cyclic/proof.hpp"

#include <stdexcept>
#include <string>

namespace cyclic {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& msg);
    std::size_t line, column;
};

ProofGraph parse_proof(const std::string& text);
std::string serialize_proof(const ProofGraph& g);
std::string export_dot(const ProofGraph& g);

// edges (parent, premise index) that close a cycle in a DFS from the root
std::vector<std::pair<NodeId, std::size_t>> back_edges(const ProofGraph& g);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

}  // namespace cyclic
