#include "splashwave/export.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "splashwave/conformal.hpp"
#include "splashwave/snapshot_io.hpp"

namespace splashwave {

void export_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap) {
    const int n = snap.tilde.size();
    std::ostringstream os;
    os.precision(17);
    os << "alpha,z1_tilde,z2_tilde,z1_phys,z2_phys,omega,phi\n";
    for (int j = 0; j < n; ++j) {
        const Vec2 t = snap.tilde.point(j);
        const Vec2 p = snap.physical.point(j);
        os << snap.tilde.alpha(j) << ',' << t.x << ',' << t.y << ',' << p.x << ',' << p.y << ','
           << snap.omega[j] << ',' << snap.phi[j] << '\n';
    }
    write_text_file(path, os.str());
}

void export_csv(const std::filesystem::path& dir, const Trajectory& traj) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(Errc::IOFailure, "cannot create " + dir.string());
    for (size_t i = 0; i < traj.snapshots.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%06zu.csv", i);
        export_snapshot_csv(dir / name, traj.snapshots[i]);
    }
    std::ostringstream os;
    os.precision(17);
    os << "time,fourier_tail,arc_chord,min_q_distance,min_gap,graph_margin\n";
    for (const StepDiagnostics& d : traj.steps)
        os << d.time << ',' << d.fourier_tail << ',' << d.arc_chord << ',' << d.min_q_distance
           << ',' << d.min_gap << ',' << d.graph_margin << '\n';
    write_text_file(dir / "diagnostics.csv", os.str());
}

void export_svg(const std::filesystem::path& path, const Snapshot& snap, SvgFrame frame) {
    const PeriodicCurve& curve = frame == SvgFrame::tilde ? snap.tilde : snap.physical;
    const int n = curve.size();

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    auto grow = [&](Vec2 p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    };
    for (int j = 0; j < n; ++j) grow(curve.point(j));
    if (frame == SvgFrame::tilde)
        for (const Vec2& q : SingularPointSet::standard().points) grow(q);

    const double pad = 0.08 * std::max(xmax - xmin, ymax - ymin) + 1e-6;
    xmin -= pad, xmax += pad, ymin -= pad, ymax += pad;

    const double width = 640.0;
    const double scale = width / (xmax - xmin);
    const double height = (ymax - ymin) * scale;
    auto sx = [&](double x) { return (x - xmin) * scale; };
    auto sy = [&](double y) { return height - (y - ymin) * scale; };  // y up

    std::ostringstream os;
    os.precision(8);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "  <polyline fill=\"none\" stroke=\"#1f4f8f\" stroke-width=\"1.5\" points=\"";
    for (int j = 0; j < n; ++j) {
        const Vec2 p = curve.point(j);
        os << sx(p.x) << ',' << sy(p.y) << ' ';
    }
    if (frame == SvgFrame::tilde) {
        const Vec2 p0 = curve.point(0);
        os << sx(p0.x) << ',' << sy(p0.y);
    }
    os << "\"/>\n";
    if (frame == SvgFrame::tilde) {
        for (const Vec2& q : SingularPointSet::standard().points)
            os << "  <circle cx=\"" << sx(q.x) << "\" cy=\"" << sy(q.y)
               << "\" r=\"3\" fill=\"#c03030\"/>\n";
    }
    os << "  <text x=\"8\" y=\"16\" font-size=\"12\">t = " << snap.time << "</text>\n";
    os << "</svg>\n";
    write_text_file(path, os.str());
}

}  // namespace splashwave
