#pragma once

#include <utility>
#include <vector>

namespace stanceplan {

// Default geometric tolerance (meters) and minimum useful cell area (m^2).
constexpr double kTolGeo = 1e-3;
constexpr double kMinArea = 1e-3;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }

// Lexicographic (x, then y); the deterministic tie-break used throughout.
inline bool lex_less(const Point2& a, const Point2& b) {
    if (a.x != b.x) return a.x < b.x;
    return a.y < b.y;
}

double distance(const Point2& a, const Point2& b);

// Ring vertices are stored without a repeated closing vertex.
using Ring = std::vector<Point2>;

// Simple polygon with optional holes. Exterior counter-clockwise, holes
// clockwise, per the invariants enforced by validate_polygon().
struct Polygon2 {
    Ring exterior;
    std::vector<Ring> holes;
};

struct CircleRegion {
    Point2 center;
    double radius = 0.0;
};

struct HullResult {
    Polygon2 polygon;
    // Set when the alpha-shape fragmented and only the largest-area
    // component was kept.
    bool multiple_components = false;
};

// One maximal overlap cell (or single-region remainder) of the feasible
// region arrangement: the cell polygon plus the ids of every region that
// contains it.
struct OverlapRegion {
    std::vector<int> target_ids;
    Polygon2 polygon;
};

double ring_signed_area(const Ring& ring);
double ring_perimeter(const Ring& ring);
double polygon_area(const Polygon2& poly);

// Even-odd containment over exterior and holes. Boundary points count as
// inside.
bool point_in_polygon(const Point2& p, const Polygon2& poly);

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

// Min distance from p to any boundary segment (exterior and holes).
double distance_to_boundary(const Point2& p, const Polygon2& poly);

// Negative inside, positive outside.
double signed_distance(const Point2& p, const Polygon2& poly);

// Throws ValidationError naming the violated invariant.
void validate_polygon(const Polygon2& poly, const char* what = "polygon");

// Alpha-shape concave hull: Delaunay triangles with circumradius <= alpha,
// largest connected component, boundary stitched into exterior + holes.
// Throws DegenerateInput for <3 points, collinear input, or an alpha small
// enough to erase every triangle.
HullResult concave_hull(const std::vector<Point2>& points, double alpha);

// Maximal overlap cells of the input regions plus per-region non-overlapping
// remainders. Cells are disjoint; member-id subsets deeper than max_depth are
// truncated at max_depth; components below min_area are dropped.
std::vector<OverlapRegion> polygon_overlaps(const std::vector<std::pair<int, Polygon2>>& regions,
                                            double min_area = kMinArea, int max_depth = 6);

// Chebyshev center / largest inscribed circle. Voronoi of the resampled
// boundary (spacing ~ tol), exact clearance refinement, lexicographic
// tie-break; grid fallback for polygons with fewer than 6 vertices.
// Throws DegenerateInput when polygon area < kMinArea.
CircleRegion largest_inscribed_circle(const Polygon2& poly, double tol = kTolGeo);

// Douglas-Peucker per ring; returns the input unchanged if simplification
// would produce an invalid polygon.
Polygon2 simplify_polygon(const Polygon2& poly, double eps);

}  // namespace stanceplan
