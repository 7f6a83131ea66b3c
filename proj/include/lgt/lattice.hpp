#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace lgt {

using LinkId = int;
using VertexId = int;
using PlaquetteId = int;

enum class LinkKind { Horizontal, Vertical, Pinned };

enum class Side { Left, Right, Top, Bottom };

// A dangling boundary link attached to the vertex at (row, col). It carries a
// qubit like any grid link, but it participates in exactly one grid vertex
// operator (which it promotes by one Z factor) and in one extra single-Z
// "external" vertex operator of its own.
struct ExtraLink {
    Side side;
    int row = 0;
    int col = 0;
};

struct LatticeSpec {
    int lx = 2; // vertex count along x (columns)
    int ly = 2; // vertex count along y (rows)
    std::vector<ExtraLink> pinned_links;
};

struct LinkInfo {
    LinkId id;
    LinkKind kind;
    int row;
    int col;
    bool pinned;
};

// Open-boundary rectangular grid of lx*ly vertices with qubits on the links.
//
// Index order is fixed so that configs, shot tables and golden files are
// stable across runs: rows top to bottom, horizontal links of a row before
// the vertical links below it, pinned extras appended last in spec order.
class Lattice {
  public:
    explicit Lattice(const LatticeSpec& spec);

    int lx() const { return spec_.lx; }
    int ly() const { return spec_.ly; }
    int n_links() const { return static_cast<int>(links_.size()); }
    int n_grid_links() const { return n_links() - n_pinned(); }
    int n_vertices() const { return spec_.lx * spec_.ly; }
    int n_plaquettes() const { return (spec_.lx - 1) * (spec_.ly - 1); }
    int n_pinned() const { return static_cast<int>(spec_.pinned_links.size()); }

    const LatticeSpec& spec() const { return spec_; }
    const std::vector<LinkInfo>& links() const { return links_; }

    VertexId vertex_at(int row, int col) const;
    std::pair<int, int> vertex_coords(VertexId v) const;

    LinkId horizontal_link(int row, int col) const; // (row,col) -- (row,col+1)
    LinkId vertical_link(int row, int col) const;   // (row,col) -- (row+1,col)
    LinkId pinned_link(int index) const;
    const std::vector<LinkId>& pinned_link_ids() const { return pinned_ids_; }

    // Z-support of the vertex operator, pinned extras included.
    const std::vector<LinkId>& vertex_support(VertexId v) const;
    // X-support of the plaquette operator, always four links.
    const std::array<LinkId, 4>& plaquette_support(PlaquetteId p) const;
    // Vertex the pinned link is attached to.
    VertexId pinned_attachment(int index) const;

    // Grid endpoints of a link; a pinned link has one endpoint, second = -1.
    std::pair<VertexId, VertexId> link_endpoints(LinkId l) const;

    bool is_boundary_link(LinkId l) const;

    int manhattan_distance(VertexId a, VertexId b) const;

    nlohmann::json to_json() const;

  private:
    LatticeSpec spec_;
    std::vector<LinkInfo> links_;
    std::vector<LinkId> pinned_ids_;
    std::vector<VertexId> pinned_attach_;
    std::vector<std::vector<LinkId>> vertex_supports_;
    std::vector<std::array<LinkId, 4>> plaquette_supports_;
};

// Closed-form entangling-gate count of one compiled Trotter cycle on an
// lx-by-ly grid without pinned extras.
int entangling_count_per_cycle(int lx, int ly);

struct Rational {
    long long num = 0;
    long long den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    bool operator==(const Rational&) const = default;
};

// Mean Manhattan distance over all unordered pairs of distinct vertices; the
// charge-separation expectation of the maximally mixed state.
Rational mixed_state_mean_separation(int lx, int ly);

// Ordered, connected chain of links; the support of an X-string.
struct PathSpec {
    std::vector<LinkId> links;
};

// Grid vertices of odd incidence (the charge endpoints the string creates).
// Pinned links contribute their attachment vertex only. Throws if the links
// do not form a connected path.
std::vector<VertexId> path_endpoints(const Lattice& lattice, const PathSpec& path);

} // namespace lgt
