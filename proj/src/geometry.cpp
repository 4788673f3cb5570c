#include "stanceplan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <unordered_map>

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <boost/geometry/geometries/multi_polygon.hpp>
#include <boost/polygon/voronoi.hpp>

#include "stanceplan/errors.hpp"

namespace stanceplan {

namespace bg = boost::geometry;
using BoostPoint = bg::model::d2::point_xy<double>;
using BoostPolygon = bg::model::polygon<BoostPoint, false, true>;  // ccw, closed
using BoostMultiPolygon = bg::model::multi_polygon<BoostPolygon>;

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double ring_signed_area(const Ring& ring) {
    double acc = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = ring[i];
        const Point2& q = ring[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    return 0.5 * acc;
}

double ring_perimeter(const Ring& ring) {
    double acc = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) acc += distance(ring[i], ring[(i + 1) % n]);
    return acc;
}

double polygon_area(const Polygon2& poly) {
    double area = ring_signed_area(poly.exterior);
    for (const Ring& h : poly.holes) area -= std::abs(ring_signed_area(h));
    return area;
}

namespace {

bool point_on_ring_boundary(const Point2& p, const Ring& ring, double eps) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (point_segment_distance(p, ring[i], ring[(i + 1) % n]) <= eps) return true;
    }
    return false;
}

bool point_in_ring(const Point2& p, const Ring& ring) {
    bool inside = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point2& a = ring[i];
        const Point2& b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double xint = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
            if (p.x < xint) inside = !inside;
        }
    }
    return inside;
}

}  // namespace

bool point_in_polygon(const Point2& p, const Polygon2& poly) {
    constexpr double kBoundaryEps = 1e-12;
    if (point_on_ring_boundary(p, poly.exterior, kBoundaryEps)) return true;
    if (!point_in_ring(p, poly.exterior)) return false;
    for (const Ring& h : poly.holes) {
        if (point_on_ring_boundary(p, h, kBoundaryEps)) return true;
        if (point_in_ring(p, h)) return false;
    }
    return true;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    const double vx = b.x - a.x;
    const double vy = b.y - a.y;
    const double len2 = vx * vx + vy * vy;
    if (len2 <= 0.0) return distance(p, a);
    double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

namespace {

double ring_boundary_distance(const Point2& p, const Ring& ring) {
    double best = std::numeric_limits<double>::infinity();
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        best = std::min(best, point_segment_distance(p, ring[i], ring[(i + 1) % n]));
    }
    return best;
}

}  // namespace

double distance_to_boundary(const Point2& p, const Polygon2& poly) {
    double best = ring_boundary_distance(p, poly.exterior);
    for (const Ring& h : poly.holes) best = std::min(best, ring_boundary_distance(p, h));
    return best;
}

double signed_distance(const Point2& p, const Polygon2& poly) {
    const double d = distance_to_boundary(p, poly);
    return point_in_polygon(p, poly) ? -d : d;
}

void validate_polygon(const Polygon2& poly, const char* what) {
    const std::string name(what);
    if (poly.exterior.size() < 3)
        throw ValidationError(name + ": exterior ring needs at least 3 vertices");
    for (const Point2& p : poly.exterior) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw ValidationError(name + ": non-finite vertex coordinate");
    }
    if (ring_signed_area(poly.exterior) <= 0.0)
        throw ValidationError(name + ": exterior ring must be counter-clockwise with area > 0");
    for (const Ring& h : poly.holes) {
        if (h.size() < 3) throw ValidationError(name + ": hole ring needs at least 3 vertices");
        for (const Point2& p : h) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y))
                throw ValidationError(name + ": non-finite hole vertex coordinate");
        }
        if (ring_signed_area(h) >= 0.0)
            throw ValidationError(name + ": hole rings must be clockwise");
    }
}

// ---------------------------------------------------------------------------
// Boost conversions
// ---------------------------------------------------------------------------

namespace {

BoostPolygon to_boost(const Polygon2& poly) {
    BoostPolygon out;
    for (const Point2& p : poly.exterior) out.outer().push_back(BoostPoint(p.x, p.y));
    out.inners().resize(poly.holes.size());
    for (std::size_t i = 0; i < poly.holes.size(); ++i) {
        for (const Point2& p : poly.holes[i]) out.inners()[i].push_back(BoostPoint(p.x, p.y));
    }
    bg::correct(out);
    return out;
}

Ring from_boost_ring(const BoostPolygon::ring_type& ring) {
    Ring out;
    for (const BoostPoint& p : ring) out.push_back({p.x(), p.y()});
    if (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
}

Polygon2 from_boost(const BoostPolygon& poly) {
    Polygon2 out;
    out.exterior = from_boost_ring(poly.outer());
    for (const auto& inner : poly.inners()) {
        Ring h = from_boost_ring(inner);
        if (h.size() >= 3) out.holes.push_back(std::move(h));
    }
    return out;
}

double multi_area(const BoostMultiPolygon& mp) { return bg::area(mp); }

}  // namespace

// ---------------------------------------------------------------------------
// Delaunay triangulation via the Voronoi dual
// ---------------------------------------------------------------------------

namespace {

struct IntPoint {
    std::int32_t x;
    std::int32_t y;
};

struct ScaledSites {
    std::vector<boost::polygon::point_data<std::int32_t>> points;
    std::vector<int> original_index;  // per site
    double min_x = 0.0, min_y = 0.0, factor = 1.0;
};

// Map doubles to the int32 grid Boost.Polygon's Voronoi builder expects.
// Topology only; all metric quantities are recomputed in original
// coordinates. Coincident grid cells are deduplicated.
ScaledSites scale_sites(const std::vector<Point2>& pts) {
    ScaledSites s;
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x;
    double max_x = -min_x;
    double max_y = -min_x;
    for (const Point2& p : pts) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
    s.min_x = min_x;
    s.min_y = min_y;
    s.factor = 1e8 / span;
    std::unordered_map<std::uint64_t, int> seen;
    seen.reserve(pts.size() * 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto xi = static_cast<std::int32_t>(std::llround((pts[i].x - min_x) * s.factor));
        const auto yi = static_cast<std::int32_t>(std::llround((pts[i].y - min_y) * s.factor));
        const std::uint64_t key =
            (static_cast<std::uint64_t>(static_cast<std::uint32_t>(xi)) << 32) |
            static_cast<std::uint32_t>(yi);
        if (seen.emplace(key, static_cast<int>(i)).second) {
            s.points.emplace_back(xi, yi);
            s.original_index.push_back(static_cast<int>(i));
        }
    }
    return s;
}

struct Tri {
    int a, b, c;           // original point indices, CCW
    double circumradius;
    double area;
};

double tri_signed_area(const Point2& a, const Point2& b, const Point2& c) {
    return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

std::vector<Tri> delaunay_triangles(const std::vector<Point2>& pts) {
    const ScaledSites sites = scale_sites(pts);
    if (sites.points.size() < 3) return {};

    boost::polygon::voronoi_diagram<double> vd;
    boost::polygon::construct_voronoi(sites.points.begin(), sites.points.end(), &vd);

    std::vector<Tri> tris;
    for (const auto& vertex : vd.vertices()) {
        // Sites around a Voronoi vertex form the dual Delaunay face
        // (a triangle, or a co-circular polygon we fan-triangulate).
        std::vector<int> around;
        const auto* edge = vertex.incident_edge();
        const auto* start = edge;
        do {
            around.push_back(sites.original_index[edge->cell()->source_index()]);
            edge = edge->rot_next();
        } while (edge != start);
        if (around.size() < 3) continue;

        const Point2 center{vertex.x() / sites.factor + sites.min_x,
                            vertex.y() / sites.factor + sites.min_y};
        const double radius = distance(center, pts[around[0]]);
        for (std::size_t k = 1; k + 1 < around.size(); ++k) {
            Tri t{around[0], around[k], around[k + 1], radius, 0.0};
            double a = tri_signed_area(pts[t.a], pts[t.b], pts[t.c]);
            if (a < 0.0) {
                std::swap(t.b, t.c);
                a = -a;
            }
            if (a <= 0.0) continue;
            t.area = a;
            tris.push_back(t);
        }
    }
    return tris;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
           static_cast<std::uint32_t>(b);
}

}  // namespace

HullResult concave_hull(const std::vector<Point2>& points, double alpha) {
    if (points.size() < 3) throw DegenerateInput("concave_hull: need at least 3 points");
    if (!(alpha > 0.0)) throw DegenerateInput("concave_hull: alpha must be positive");
    for (const Point2& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw DegenerateInput("concave_hull: non-finite input point");
    }

    const std::vector<Tri> all = delaunay_triangles(points);
    std::vector<int> kept;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (all[i].circumradius <= alpha) kept.push_back(static_cast<int>(i));
    }
    if (all.empty()) throw DegenerateInput("concave_hull: points are collinear or coincident");
    if (kept.empty()) throw DegenerateInput("concave_hull: alpha too small, empty shape");

    // Connected components over shared edges.
    std::unordered_map<std::uint64_t, std::vector<int>> edge_tris;
    edge_tris.reserve(kept.size() * 3);
    for (int ti : kept) {
        const Tri& t = all[ti];
        edge_tris[edge_key(t.a, t.b)].push_back(ti);
        edge_tris[edge_key(t.b, t.c)].push_back(ti);
        edge_tris[edge_key(t.c, t.a)].push_back(ti);
    }
    UnionFind uf(static_cast<int>(all.size()));
    for (const auto& [key, tl] : edge_tris) {
        for (std::size_t i = 1; i < tl.size(); ++i) uf.unite(tl[0], tl[i]);
    }
    std::map<int, double> component_area;
    for (int ti : kept) component_area[uf.find(ti)] += all[ti].area;
    int best_root = -1;
    double best_area = -1.0;
    for (const auto& [root, area] : component_area) {
        if (area > best_area) {
            best_area = area;
            best_root = root;
        }
    }
    const bool fragmented = component_area.size() > 1;

    std::set<int> main_tris;
    for (int ti : kept) {
        if (uf.find(ti) == best_root) main_tris.insert(ti);
    }

    // Directed boundary edges: triangle edges whose twin triangle is absent
    // from the kept set. Triangles are CCW so the interior stays on the left,
    // which makes exterior loops CCW and hole loops CW.
    struct DirEdge {
        int from, to;
        bool used = false;
    };
    std::vector<DirEdge> dedges;
    std::unordered_map<int, std::vector<int>> out_edges;  // vertex -> edge ids
    auto add_if_boundary = [&](int a, int b, int self) {
        const auto& tl = edge_tris.at(edge_key(a, b));
        int kept_count = 0;
        for (int ti : tl) {
            if (main_tris.count(ti)) ++kept_count;
        }
        (void)self;
        if (kept_count == 1) {
            out_edges[a].push_back(static_cast<int>(dedges.size()));
            dedges.push_back({a, b});
        }
    };
    for (int ti : main_tris) {
        const Tri& t = all[ti];
        add_if_boundary(t.a, t.b, ti);
        add_if_boundary(t.b, t.c, ti);
        add_if_boundary(t.c, t.a, ti);
    }

    auto pick_next = [&](int at, const Point2& incoming_dir) -> int {
        int best = -1;
        double best_angle = std::numeric_limits<double>::infinity();
        auto it = out_edges.find(at);
        if (it == out_edges.end()) return -1;
        for (int ei : it->second) {
            if (dedges[ei].used) continue;
            const Point2& q = points[dedges[ei].to];
            const Point2& p = points[at];
            const double wx = q.x - p.x;
            const double wy = q.y - p.y;
            // Rightmost turn first keeps loops simple at pinch vertices.
            const double ang = std::atan2(incoming_dir.x * wy - incoming_dir.y * wx,
                                          incoming_dir.x * wx + incoming_dir.y * wy);
            if (ang < best_angle) {
                best_angle = ang;
                best = ei;
            }
        }
        return best;
    };

    std::vector<Ring> loops;
    for (std::size_t start = 0; start < dedges.size(); ++start) {
        if (dedges[start].used) continue;
        Ring loop;
        int ei = static_cast<int>(start);
        const int loop_start = dedges[start].from;
        while (ei >= 0 && !dedges[ei].used) {
            dedges[ei].used = true;
            loop.push_back(points[dedges[ei].from]);
            const int at = dedges[ei].to;
            if (at == loop_start) break;
            const Point2 dir{points[at].x - points[dedges[ei].from].x,
                             points[at].y - points[dedges[ei].from].y};
            ei = pick_next(at, dir);
        }
        if (loop.size() >= 3) loops.push_back(std::move(loop));
    }

    HullResult result;
    result.multiple_components = fragmented;
    double best_loop_area = 0.0;
    int exterior_idx = -1;
    for (std::size_t i = 0; i < loops.size(); ++i) {
        const double a = ring_signed_area(loops[i]);
        if (a > best_loop_area) {
            best_loop_area = a;
            exterior_idx = static_cast<int>(i);
        }
    }
    if (exterior_idx < 0) throw DegenerateInput("concave_hull: no closed exterior boundary");
    result.polygon.exterior = loops[exterior_idx];
    for (std::size_t i = 0; i < loops.size(); ++i) {
        if (static_cast<int>(i) == exterior_idx) continue;
        const double a = ring_signed_area(loops[i]);
        if (a < 0.0 && -a >= kMinArea) result.polygon.holes.push_back(loops[i]);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Overlap arrangement
// ---------------------------------------------------------------------------

std::vector<OverlapRegion> polygon_overlaps(const std::vector<std::pair<int, Polygon2>>& regions,
                                            double min_area, int max_depth) {
    struct Cell {
        std::vector<int> members;
        BoostMultiPolygon geom;
    };

    std::vector<BoostPolygon> boost_regions;
    boost_regions.reserve(regions.size());
    for (const auto& [id, poly] : regions) {
        validate_polygon(poly, "polygon_overlaps region");
        boost_regions.push_back(to_boost(poly));
    }

    std::vector<Cell> cells;
    for (std::size_t k = 0; k < regions.size(); ++k) {
        const BoostPolygon& rk = boost_regions[k];
        std::vector<Cell> next;
        next.reserve(cells.size() * 2 + 1);
        for (Cell& cell : cells) {
            if (static_cast<int>(cell.members.size()) >= max_depth) {
                // Truncate: subsets deeper than max_depth are not split further.
                next.push_back(std::move(cell));
                continue;
            }
            BoostMultiPolygon inter, diff;
            bg::intersection(cell.geom, rk, inter);
            bg::difference(cell.geom, rk, diff);
            if (multi_area(inter) > 0.0) {
                Cell c;
                c.members = cell.members;
                c.members.push_back(regions[k].first);
                c.geom = std::move(inter);
                next.push_back(std::move(c));
            }
            if (multi_area(diff) > 0.0) {
                next.push_back({std::move(cell.members), std::move(diff)});
            }
        }
        // Part of region k not covered by any earlier region.
        BoostMultiPolygon rem;
        rem.push_back(rk);
        for (std::size_t j = 0; j < k && !rem.empty(); ++j) {
            BoostMultiPolygon tmp;
            bg::difference(rem, boost_regions[j], tmp);
            rem = std::move(tmp);
        }
        if (multi_area(rem) > 0.0) next.push_back({{regions[k].first}, std::move(rem)});
        cells = std::move(next);
    }

    std::vector<OverlapRegion> out;
    for (Cell& cell : cells) {
        std::sort(cell.members.begin(), cell.members.end());
        for (const BoostPolygon& poly : cell.geom) {
            if (bg::area(poly) < min_area) continue;
            Polygon2 p = from_boost(poly);
            if (p.exterior.size() < 3) continue;
            out.push_back({cell.members, std::move(p)});
        }
    }
    // Deterministic output order: by member set, then by cell position.
    std::sort(out.begin(), out.end(), [](const OverlapRegion& a, const OverlapRegion& b) {
        if (a.target_ids != b.target_ids) return a.target_ids < b.target_ids;
        return lex_less(a.polygon.exterior.front(), b.polygon.exterior.front());
    });
    return out;
}

// ---------------------------------------------------------------------------
// Largest inscribed circle
// ---------------------------------------------------------------------------

namespace {

void resample_ring(const Ring& ring, double spacing, std::vector<Point2>& out) {
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& a = ring[i];
        const Point2& b = ring[(i + 1) % n];
        out.push_back(a);
        const double len = distance(a, b);
        const int segments = static_cast<int>(std::floor(len / spacing));
        for (int s = 1; s < segments; ++s) {
            const double t = static_cast<double>(s) / segments;
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
}

CircleRegion grid_chebyshev(const Polygon2& poly, double tol) {
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = min_x, max_x = -min_x, max_y = -min_x;
    for (const Point2& p : poly.exterior) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const int kGrid = 41;
    double cx0 = min_x, cy0 = min_y, cx1 = max_x, cy1 = max_y;
    Point2 best{min_x, min_y};
    double best_clear = -1.0;
    double cell = std::max(cx1 - cx0, cy1 - cy0) / (kGrid - 1);
    while (true) {
        const double dx = (cx1 - cx0) / (kGrid - 1);
        const double dy = (cy1 - cy0) / (kGrid - 1);
        for (int i = 0; i < kGrid; ++i) {
            for (int j = 0; j < kGrid; ++j) {
                const Point2 p{cx0 + i * dx, cy0 + j * dy};
                if (!point_in_polygon(p, poly)) continue;
                const double c = distance_to_boundary(p, poly);
                if (c > best_clear + 1e-12) {
                    best_clear = c;
                    best = p;
                }
            }
        }
        if (cell <= tol / 4.0) break;
        cell = std::max(dx, dy) / 2.0;
        cx0 = best.x - 2.0 * cell * (kGrid - 1) / kGrid;
        cx1 = best.x + 2.0 * cell * (kGrid - 1) / kGrid;
        cy0 = best.y - 2.0 * cell * (kGrid - 1) / kGrid;
        cy1 = best.y + 2.0 * cell * (kGrid - 1) / kGrid;
        cell = (cx1 - cx0) / (kGrid - 1);
    }
    if (best_clear <= 0.0) throw DegenerateInput("largest_inscribed_circle: no interior point found");
    return {best, best_clear};
}

}  // namespace

CircleRegion largest_inscribed_circle(const Polygon2& poly, double tol) {
    if (polygon_area(poly) < kMinArea)
        throw DegenerateInput("largest_inscribed_circle: polygon area below min_area");

    std::size_t vertex_count = poly.exterior.size();
    for (const Ring& h : poly.holes) vertex_count += h.size();
    if (vertex_count < 6) return grid_chebyshev(poly, tol);

    double perimeter = ring_perimeter(poly.exterior);
    for (const Ring& h : poly.holes) perimeter += ring_perimeter(h);
    double spacing = tol;
    constexpr double kMaxSites = 30000.0;
    if (perimeter / spacing > kMaxSites) spacing = perimeter / kMaxSites;

    std::vector<Point2> sites;
    sites.reserve(static_cast<std::size_t>(perimeter / spacing) + vertex_count + 8);
    resample_ring(poly.exterior, spacing, sites);
    for (const Ring& h : poly.holes) resample_ring(h, spacing, sites);

    const ScaledSites scaled = scale_sites(sites);
    boost::polygon::voronoi_diagram<double> vd;
    boost::polygon::construct_voronoi(scaled.points.begin(), scaled.points.end(), &vd);

    // First pass: estimate clearance from the distance to the defining site.
    std::vector<std::pair<Point2, double>> interior;
    double best_estimate = -1.0;
    for (const auto& vertex : vd.vertices()) {
        const Point2 p{vertex.x() / scaled.factor + scaled.min_x,
                       vertex.y() / scaled.factor + scaled.min_y};
        if (!point_in_polygon(p, poly)) continue;
        const int site = scaled.original_index[vertex.incident_edge()->cell()->source_index()];
        const double est = distance(p, sites[site]);
        interior.emplace_back(p, est);
        best_estimate = std::max(best_estimate, est);
    }
    if (interior.empty()) return grid_chebyshev(poly, tol);

    // Second pass: exact boundary clearance for every near-optimal vertex so
    // the lexicographic tie-break sees the whole maximal locus.
    Point2 best_center{};
    double best_clear = -1.0;
    bool found = false;
    for (const auto& [p, est] : interior) {
        if (est < best_estimate - std::max(tol, 4.0 * spacing)) continue;
        const double c = distance_to_boundary(p, poly);
        if (!found || c > best_clear + 1e-9 ||
            (c > best_clear - 1e-9 && lex_less(p, best_center))) {
            best_clear = c;
            best_center = p;
            found = true;
        }
    }
    if (!found || best_clear <= 0.0) return grid_chebyshev(poly, tol);
    return {best_center, best_clear};
}

Polygon2 simplify_polygon(const Polygon2& poly, double eps) {
    BoostPolygon in = to_boost(poly);
    BoostPolygon out;
    bg::simplify(in, out, eps);
    if (out.outer().size() < 4) return poly;  // closed ring: 3 vertices + closure
    Polygon2 result = from_boost(out);
    if (result.exterior.size() < 3) return poly;
    if (!bg::is_valid(out)) return poly;
    return result;
}

}  // namespace stanceplan
