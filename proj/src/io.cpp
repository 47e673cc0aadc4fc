#include "incsp/io.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace incsp {

double Instance::max_weight() const {
    double w = 1.0;
    for (const WeightedEdge& e : initial_edges) w = std::max(w, e.weight);
    for (const InstanceItem& it : items) {
        if (const Update* u = std::get_if<Update>(&it)) w = std::max(w, u->weight);
    }
    return w;
}

std::size_t Instance::update_count() const {
    std::size_t c = 0;
    for (const InstanceItem& it : items) c += std::holds_alternative<Update>(it);
    return c;
}

std::size_t Instance::final_edge_count() const {
    std::size_t c = initial_edges.size();
    for (const InstanceItem& it : items) {
        if (const Update* u = std::get_if<Update>(&it)) c += u->kind == UpdateKind::insert;
    }
    return c;
}

UpdateSequence Instance::updates_only() const {
    UpdateSequence seq;
    for (const InstanceItem& it : items) {
        if (const Update* u = std::get_if<Update>(&it)) seq.updates.push_back(*u);
    }
    return seq;
}

DynGraph Instance::build_initial_graph() const {
    DynGraph g(n);
    for (const WeightedEdge& e : initial_edges) g.add_initial_edge(e.tail, e.head, e.weight);
    return g;
}

namespace {

[[noreturn]] void bail(std::size_t line_no, const std::string& what) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Instance parse_instance(std::istream& is) {
    Instance inst;
    std::string line;
    std::size_t line_no = 0;
    std::size_t m0 = 0;
    bool header_seen = false;
    std::size_t initial_read = 0;

    while (std::getline(is, line)) {
        ++line_no;
        std::istringstream ss(line);
        std::string tok;
        if (!(ss >> tok)) continue;  // blank line
        if (tok == "#") continue;    // comment

        auto read_vertex = [&](VertexId& v) {
            long long x;
            std::istringstream t2(tok);
            if (!(t2 >> x) || x < 0 || static_cast<std::size_t>(x) >= inst.n) {
                bail(line_no, "bad vertex '" + tok + "'");
            }
            v = static_cast<VertexId>(x);
        };
        auto next_vertex = [&](VertexId& v) {
            if (!(ss >> tok)) bail(line_no, "missing vertex");
            read_vertex(v);
        };
        auto next_weight = [&](double& w) {
            if (!(ss >> w)) bail(line_no, "missing weight");
            if (!(w == 0.0 || w >= 1.0)) bail(line_no, "weight outside {0} u [1, W]");
        };

        if (!header_seen) {
            std::istringstream hs(line);
            long long n, m;
            if (!(hs >> n >> m) || n <= 0 || m < 0) bail(line_no, "expected header 'n m0'");
            inst.n = static_cast<std::size_t>(n);
            m0 = static_cast<std::size_t>(m);
            header_seen = true;
            continue;
        }
        if (initial_read < m0) {
            WeightedEdge e;
            read_vertex(e.tail);
            next_vertex(e.head);
            next_weight(e.weight);
            inst.initial_edges.push_back(e);
            ++initial_read;
            continue;
        }
        if (tok == "+" || tok == "~") {
            Update u;
            u.kind = tok == "+" ? UpdateKind::insert : UpdateKind::decrease;
            next_vertex(u.tail);
            next_vertex(u.head);
            next_weight(u.weight);
            inst.items.emplace_back(u);
        } else if (tok == "?") {
            QueryPair q;
            next_vertex(q.u);
            next_vertex(q.v);
            inst.items.emplace_back(q);
        } else if (tok == "?s") {
            QuerySssp q;
            next_vertex(q.v);
            inst.items.emplace_back(q);
        } else if (tok == "?off") {
            QueryOffline q;
            next_vertex(q.v);
            long long t;
            if (!(ss >> t) || t < 0) bail(line_no, "bad offline timestamp");
            q.t = static_cast<std::uint32_t>(t);
            inst.items.emplace_back(q);
        } else {
            bail(line_no, "unrecognized line kind '" + tok + "'");
        }
    }
    if (!header_seen) throw std::invalid_argument("empty instance file");
    if (initial_read < m0) {
        throw std::invalid_argument("instance ended before " + std::to_string(m0) +
                                    " initial edges");
    }
    return inst;
}

Instance load_instance(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open instance file: " + path);
    return parse_instance(f);
}

void write_instance(std::ostream& os, const Instance& inst) {
    os << std::setprecision(17);
    os << inst.n << " " << inst.initial_edges.size() << "\n";
    for (const WeightedEdge& e : inst.initial_edges) {
        os << e.tail << " " << e.head << " " << e.weight << "\n";
    }
    for (const InstanceItem& it : inst.items) {
        if (const Update* u = std::get_if<Update>(&it)) {
            os << (u->kind == UpdateKind::insert ? "+ " : "~ ") << u->tail << " " << u->head << " "
               << u->weight << "\n";
        } else if (const QueryPair* q = std::get_if<QueryPair>(&it)) {
            os << "? " << q->u << " " << q->v << "\n";
        } else if (const QuerySssp* q = std::get_if<QuerySssp>(&it)) {
            os << "?s " << q->v << "\n";
        } else if (const QueryOffline* q = std::get_if<QueryOffline>(&it)) {
            os << "?off " << q->v << " " << q->t << "\n";
        }
    }
}

}  // namespace incsp
