#include "btz/spacetime.hpp"

namespace btz {

namespace {

constexpr double kCut = 2.0 / 3.0;

int corner_region(const Vec3& alpha)
{
    for (int i = 0; i < 3; ++i)
        if (alpha(i) >= kCut)
            return i;
    return -1;
}

}  // namespace

Vec3 hexagon_blend(const Vec3& alpha)
{
    const int corner = corner_region(alpha);
    if (corner >= 0)
        return Vec3::Unit(corner);
    const Vec3 w = Vec3::Constant(kCut) - alpha;
    const Vec3 c(alpha(0) * w(1) * w(2), alpha(1) * w(0) * w(2), alpha(2) * w(0) * w(1));
    return c / c.sum();
}

Mat32 hexagon_blend_jacobian(const Vec3& alpha)
{
    if (corner_region(alpha) >= 0)
        return Mat32::Zero();
    const Vec3 w = Vec3::Constant(kCut) - alpha;
    const Vec3 c(alpha(0) * w(1) * w(2), alpha(1) * w(0) * w(2), alpha(2) * w(0) * w(1));
    // dc_i / dalpha_m in the ambient coordinates (dw = -dalpha)
    Mat3 dc;
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3, k = (i + 2) % 3;
        dc(i, i) = w(j) * w(k);
        dc(i, j) = -alpha(i) * w(k);
        dc(i, k) = -alpha(i) * w(j);
    }
    const double s = c.sum();
    const Vec3 phi = c / s;
    const Eigen::RowVector3d ds = dc.colwise().sum();
    const Mat3 dphi = (dc - phi * ds) / s;
    Mat32 chart;
    chart.col(0) = dphi.col(0) - dphi.col(2);
    chart.col(1) = dphi.col(1) - dphi.col(2);
    return chart;
}

std::vector<Vec3> barycentric_grid(int n)
{
    std::vector<Vec3> pts;
    const double h = 1.0 / n;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; i + j < n; ++j) {
            const double a = (i + 1.0 / 3.0) * h, b = (j + 1.0 / 3.0) * h;
            pts.emplace_back(a, b, 1.0 - a - b);
            if (i + j <= n - 2) {
                const double c = (i + 2.0 / 3.0) * h, d = (j + 2.0 / 3.0) * h;
                pts.emplace_back(c, d, 1.0 - c - d);
            }
        }
    }
    return pts;
}

}  // namespace btz
