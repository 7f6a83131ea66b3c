#include "lgt/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <stdexcept>

namespace lgt {

namespace {

const char* kind_name(LinkKind k) {
    switch (k) {
    case LinkKind::Horizontal: return "h";
    case LinkKind::Vertical: return "v";
    case LinkKind::Pinned: return "pin";
    }
    return "?";
}

} // namespace

Lattice::Lattice(const LatticeSpec& spec) : spec_(spec) {
    if (spec.lx < 2 || spec.ly < 2)
        throw std::invalid_argument("lattice requires lx >= 2 and ly >= 2");

    const int lx = spec.lx, ly = spec.ly;
    for (int r = 0; r < ly; ++r) {
        for (int c = 0; c < lx - 1; ++c)
            links_.push_back({static_cast<LinkId>(links_.size()), LinkKind::Horizontal, r, c, false});
        if (r < ly - 1)
            for (int c = 0; c < lx; ++c)
                links_.push_back({static_cast<LinkId>(links_.size()), LinkKind::Vertical, r, c, false});
    }
    for (const ExtraLink& e : spec.pinned_links) {
        bool on_boundary = false;
        switch (e.side) {
        case Side::Left: on_boundary = (e.col == 0); break;
        case Side::Right: on_boundary = (e.col == lx - 1); break;
        case Side::Top: on_boundary = (e.row == 0); break;
        case Side::Bottom: on_boundary = (e.row == ly - 1); break;
        }
        if (e.row < 0 || e.row >= ly || e.col < 0 || e.col >= lx || !on_boundary)
            throw std::invalid_argument("pinned link must attach to a boundary vertex on its side");
        LinkId id = static_cast<LinkId>(links_.size());
        links_.push_back({id, LinkKind::Pinned, e.row, e.col, true});
        pinned_ids_.push_back(id);
        pinned_attach_.push_back(vertex_at(e.row, e.col));
    }

    vertex_supports_.resize(n_vertices());
    for (const LinkInfo& l : links_) {
        auto [a, b] = link_endpoints(l.id);
        vertex_supports_[a].push_back(l.id);
        if (b >= 0) vertex_supports_[b].push_back(l.id);
    }
    for (auto& s : vertex_supports_) std::sort(s.begin(), s.end());

    plaquette_supports_.resize(n_plaquettes());
    for (int r = 0; r < ly - 1; ++r)
        for (int c = 0; c < lx - 1; ++c)
            plaquette_supports_[r * (lx - 1) + c] = {
                horizontal_link(r, c),
                vertical_link(r, c),
                vertical_link(r, c + 1),
                horizontal_link(r + 1, c),
            };
}

VertexId Lattice::vertex_at(int row, int col) const {
    if (row < 0 || row >= spec_.ly || col < 0 || col >= spec_.lx)
        throw std::out_of_range("vertex coordinates outside lattice");
    return row * spec_.lx + col;
}

std::pair<int, int> Lattice::vertex_coords(VertexId v) const {
    if (v < 0 || v >= n_vertices()) throw std::out_of_range("vertex id outside lattice");
    return {v / spec_.lx, v % spec_.lx};
}

LinkId Lattice::horizontal_link(int row, int col) const {
    if (row < 0 || row >= spec_.ly || col < 0 || col >= spec_.lx - 1)
        throw std::out_of_range("horizontal link coordinates outside lattice");
    // Row block r holds (lx-1) horizontal links, then lx vertical links.
    return row * (2 * spec_.lx - 1) + col;
}

LinkId Lattice::vertical_link(int row, int col) const {
    if (row < 0 || row >= spec_.ly - 1 || col < 0 || col >= spec_.lx)
        throw std::out_of_range("vertical link coordinates outside lattice");
    return row * (2 * spec_.lx - 1) + (spec_.lx - 1) + col;
}

LinkId Lattice::pinned_link(int index) const {
    return pinned_ids_.at(index);
}

const std::vector<LinkId>& Lattice::vertex_support(VertexId v) const {
    return vertex_supports_.at(v);
}

const std::array<LinkId, 4>& Lattice::plaquette_support(PlaquetteId p) const {
    return plaquette_supports_.at(p);
}

VertexId Lattice::pinned_attachment(int index) const {
    return pinned_attach_.at(index);
}

std::pair<VertexId, VertexId> Lattice::link_endpoints(LinkId l) const {
    const LinkInfo& info = links_.at(l);
    switch (info.kind) {
    case LinkKind::Horizontal:
        return {vertex_at(info.row, info.col), vertex_at(info.row, info.col + 1)};
    case LinkKind::Vertical:
        return {vertex_at(info.row, info.col), vertex_at(info.row + 1, info.col)};
    case LinkKind::Pinned:
        return {vertex_at(info.row, info.col), -1};
    }
    throw std::logic_error("unreachable");
}

bool Lattice::is_boundary_link(LinkId l) const {
    const LinkInfo& info = links_.at(l);
    if (info.kind == LinkKind::Pinned) return true;
    if (info.kind == LinkKind::Horizontal) return info.row == 0 || info.row == spec_.ly - 1;
    return info.col == 0 || info.col == spec_.lx - 1;
}

int Lattice::manhattan_distance(VertexId a, VertexId b) const {
    auto [ra, ca] = vertex_coords(a);
    auto [rb, cb] = vertex_coords(b);
    return std::abs(ra - rb) + std::abs(ca - cb);
}

nlohmann::json Lattice::to_json() const {
    nlohmann::json j;
    j["lx"] = spec_.lx;
    j["ly"] = spec_.ly;
    auto links = nlohmann::json::array();
    for (const LinkInfo& l : links_)
        links.push_back({{"id", l.id},
                         {"kind", kind_name(l.kind)},
                         {"row", l.row},
                         {"col", l.col},
                         {"pinned", l.pinned}});
    j["links"] = std::move(links);
    j["vertex_supports"] = vertex_supports_;
    auto plaq = nlohmann::json::array();
    for (const auto& s : plaquette_supports_) plaq.push_back(s);
    j["plaquette_supports"] = std::move(plaq);
    return j;
}

int entangling_count_per_cycle(int lx, int ly) {
    if (lx < 2 || ly < 2) throw std::invalid_argument("lx, ly >= 2 required");
    return 16 * lx * ly - 12 * (lx + ly) + 8;
}

Rational mixed_state_mean_separation(int lx, int ly) {
    if (static_cast<long long>(lx) * ly < 2)
        throw std::invalid_argument("need at least two vertices");
    long long n = static_cast<long long>(lx) * ly;
    long long sum = 0;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            sum += std::abs(a / lx - b / lx) + std::abs(a % lx - b % lx);
    long long pairs = n * (n - 1) / 2;
    long long g = std::gcd(sum, pairs);
    return {sum / g, pairs / g};
}

std::vector<VertexId> path_endpoints(const Lattice& lattice, const PathSpec& path) {
    if (path.links.empty()) throw std::invalid_argument("empty path");
    std::vector<int> degree(lattice.n_vertices(), 0);
    for (size_t i = 0; i < path.links.size(); ++i) {
        auto [a, b] = lattice.link_endpoints(path.links[i]);
        degree[a]++;
        if (b >= 0) degree[b]++;
        if (i > 0) {
            auto [pa, pb] = lattice.link_endpoints(path.links[i - 1]);
            bool shares = (a == pa || a == pb || (b >= 0 && (b == pa || b == pb)));
            if (!shares) throw std::invalid_argument("path links are not consecutive");
        }
    }
    std::vector<VertexId> ends;
    for (VertexId v = 0; v < lattice.n_vertices(); ++v)
        if (degree[v] % 2 == 1) ends.push_back(v);
    return ends;
}

} // namespace lgt
