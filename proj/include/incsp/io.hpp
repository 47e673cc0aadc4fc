#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "incsp/graph.hpp"

namespace incsp {

// Instance text format:
//   n m0
//   u v w            (m0 initial edges)
//   + u v w          insert
//   ~ u v w          weight decrease
//   ? u v            all-pairs query marker
//   ?s v             single-source query marker (source is vertex 0)
//   ?off v t         offline query marker
// Tokens are whitespace-separated decimals, vertices 0-indexed.

struct QueryPair {
    VertexId u, v;
};
struct QuerySssp {
    VertexId v;
};
struct QueryOffline {
    VertexId v;
    std::uint32_t t;
};

using InstanceItem = std::variant<Update, QueryPair, QuerySssp, QueryOffline>;

struct Instance {
    std::size_t n = 0;
    std::vector<WeightedEdge> initial_edges;
    std::vector<InstanceItem> items;

    double max_weight() const;
    std::size_t update_count() const;
    std::size_t final_edge_count() const;  // initial edges + inserts
    UpdateSequence updates_only() const;
    DynGraph build_initial_graph() const;
};

// Throws std::invalid_argument with a line-numbered diagnostic.
Instance parse_instance(std::istream& is);
Instance load_instance(const std::string& path);
void write_instance(std::ostream& os, const Instance& inst);

}  // namespace incsp
