#include "gazesynth/pnp.hpp"
#include "gazesynth/error.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gazesynth {

namespace {

constexpr double infinity = std::numeric_limits<double>::infinity();

struct Correspondences
{
    std::span<const Vec3> model;
    std::span<const Vec2> image;
    const CameraIntrinsics& camera;

    std::size_t size() const { return model.size(); }
};

/// 0.5 * sum of squared residuals, or +inf if any point is not in front of the camera.
double half_cost(const Correspondences& c, const Mat3& R, const Vec3& t)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec3 p = R * c.model[i] + t;
        if (!(p.z() > 0.0)) {
            return infinity;
        }
        const double du = c.camera.fx() * p.x() / p.z() + c.camera.cx() - c.image[i].x();
        const double dv = c.camera.fy() * p.y() / p.z() + c.camera.cy() - c.image[i].y();
        sum += du * du + dv * dv;
    }
    return 0.5 * sum;
}

/// Least-squares translation for a fixed rotation from the linearized projection equations.
std::optional<Vec3> closed_form_translation(const Correspondences& c, const Mat3& R)
{
    Mat3 A = Mat3::Zero();
    Vec3 b = Vec3::Zero();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const double x = (c.image[i].x() - c.camera.cx()) / c.camera.fx();
        const double y = (c.image[i].y() - c.camera.cy()) / c.camera.fy();
        const Vec3 q = R * c.model[i];
        const Vec3 rx(1.0, 0.0, -x);
        const Vec3 ry(0.0, 1.0, -y);
        A += rx * rx.transpose() + ry * ry.transpose();
        b += rx * (x * q.z() - q.x()) + ry * (y * q.z() - q.y());
    }
    Eigen::LDLT<Mat3> ldlt(A);
    if (ldlt.info() != Eigen::Success) {
        return std::nullopt;
    }
    return Vec3(ldlt.solve(b));
}

struct Candidate
{
    Mat3 R;
    Vec3 t;
    double cost;
};

std::optional<Candidate> dlt_candidate(const Correspondences& c)
{
    const auto n = static_cast<Eigen::Index>(c.size());
    Eigen::MatrixXd A(2 * n, 12);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& X = c.model[static_cast<std::size_t>(i)];
        const double x =
            (c.image[static_cast<std::size_t>(i)].x() - c.camera.cx()) / c.camera.fx();
        const double y =
            (c.image[static_cast<std::size_t>(i)].y() - c.camera.cy()) / c.camera.fy();
        const Eigen::Vector4d Xh(X.x(), X.y(), X.z(), 1.0);
        A.row(2 * i) << Xh.transpose(), Eigen::RowVector4d::Zero(), -x * Xh.transpose();
        A.row(2 * i + 1) << Eigen::RowVector4d::Zero(), Xh.transpose(), -y * Xh.transpose();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const Eigen::VectorXd h = svd.matrixV().col(11);
    Eigen::Matrix<double, 3, 4> P;
    P << h.segment<4>(0).transpose(), h.segment<4>(4).transpose(), h.segment<4>(8).transpose();
    Mat3 M = P.leftCols<3>();
    Vec3 p = P.col(3);
    if (M.determinant() < 0.0) {
        M = -M;
        p = -p;
    }
    Eigen::JacobiSVD<Mat3> msvd(M);
    const double scale = msvd.singularValues().mean();
    if (!(scale > 0.0)) {
        return std::nullopt;
    }
    const Mat3 R = orthonormalize(M / scale);
    const Vec3 t = p / scale;
    const double cost = half_cost(c, R, t);
    if (!std::isfinite(cost)) {
        return std::nullopt;
    }
    return Candidate{R, t, cost};
}

std::vector<Candidate> grid_candidates(const Correspondences& c, double step_deg, int keep)
{
    constexpr double deg = std::numbers::pi / 180.0;
    const int yaw_steps = static_cast<int>(std::round(360.0 / step_deg));
    const int pitch_steps = static_cast<int>(std::round(180.0 / step_deg));
    std::vector<Candidate> best;
    for (int iy = 0; iy < yaw_steps; ++iy) {
        const Mat3 ry = rotation_y((-180.0 + iy * step_deg) * deg);
        for (int ip = 0; ip <= pitch_steps; ++ip) {
            const Mat3 ryx = ry * rotation_x((-90.0 + ip * step_deg) * deg);
            for (int ir = 0; ir < yaw_steps; ++ir) {
                const Mat3 R = ryx * rotation_z((-180.0 + ir * step_deg) * deg);
                const auto t = closed_form_translation(c, R);
                if (!t) {
                    continue;
                }
                const double cost = half_cost(c, R, *t);
                if (!std::isfinite(cost)) {
                    continue;
                }
                if (static_cast<int>(best.size()) < keep || cost < best.back().cost) {
                    const auto pos = std::upper_bound(
                        best.begin(), best.end(), cost,
                        [](double value, const Candidate& cand) { return value < cand.cost; });
                    best.insert(pos, Candidate{R, *t, cost});
                    if (static_cast<int>(best.size()) > keep) {
                        best.pop_back();
                    }
                }
            }
        }
    }
    return best;
}

Mat3 skew(const Vec3& v)
{
    Mat3 s;
    s << 0.0, -v.z(), v.y(), v.z(), 0.0, -v.x(), -v.y(), v.x(), 0.0;
    return s;
}

void linearize(const Correspondences& c, const Mat3& R, const Vec3& t,
               Eigen::Matrix<double, 6, 6>& JtJ, Eigen::Matrix<double, 6, 1>& Jtr)
{
    JtJ.setZero();
    Jtr.setZero();
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec3 q = R * c.model[i];
        const Vec3 p = q + t;
        const double iz = 1.0 / p.z();
        Eigen::Matrix<double, 2, 3> dproj;
        dproj << c.camera.fx() * iz, 0.0, -c.camera.fx() * p.x() * iz * iz, 0.0,
            c.camera.fy() * iz, -c.camera.fy() * p.y() * iz * iz;
        Eigen::Matrix<double, 2, 6> J;
        // Left-multiplicative rotation increment: R <- exp(w) R.
        J.leftCols<3>() = -dproj * skew(q);
        J.rightCols<3>() = dproj;
        const Eigen::Vector2d r(c.camera.fx() * p.x() * iz + c.camera.cx() - c.image[i].x(),
                                c.camera.fy() * p.y() * iz + c.camera.cy() - c.image[i].y());
        JtJ += J.transpose() * J;
        Jtr += J.transpose() * r;
    }
}

PnPResult refine(const Correspondences& c, Mat3 R, Vec3 t, const PnPConfig& config)
{
    double cost = half_cost(c, R, t);
    Eigen::Matrix<double, 6, 6> JtJ;
    Eigen::Matrix<double, 6, 1> g;
    linearize(c, R, t, JtJ, g);
    double mu = 1e-3 * JtJ.diagonal().maxCoeff();
    double nu = 2.0;
    bool converged = false;
    int iter = 0;
    for (; iter < config.max_iterations; ++iter) {
        if (g.cwiseAbs().maxCoeff() < config.gradient_tolerance) {
            converged = true;
            break;
        }
        Eigen::Matrix<double, 6, 6> H = JtJ;
        H.diagonal().array() += mu;
        const Eigen::Matrix<double, 6, 1> step = H.ldlt().solve(-g);
        if (step.norm() < config.step_tolerance) {
            converged = true;
            break;
        }
        const Mat3 R_new = axis_angle_to_matrix(step.head<3>()) * R;
        const Vec3 t_new = t + step.tail<3>();
        const double cost_new = half_cost(c, R_new, t_new);
        const double predicted = 0.5 * step.dot(mu * step - g);
        const double rho = (cost - cost_new) / predicted;
        if (std::isfinite(cost_new) && predicted > 0.0 && rho > 0.0) {
            R = orthonormalize(R_new);
            t = t_new;
            cost = cost_new;
            linearize(c, R, t, JtJ, g);
            mu *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
            nu = 2.0;
        } else {
            mu *= nu;
            nu *= 2.0;
            if (!std::isfinite(mu) || mu > 1e300) {
                // Damping exhausted: no descent direction left at working precision.
                converged = true;
                break;
            }
        }
    }
    PnPResult result;
    result.pose = {R, t};
    result.rms_reprojection_error = std::sqrt(2.0 * cost / static_cast<double>(c.size()));
    result.iterations = iter;
    result.converged = converged;
    return result;
}

void check_inputs(std::span<const Vec3> model, std::span<const Vec2> image)
{
    if (model.size() != image.size()) {
        throw Error(ErrorCode::InvalidArgument, "model and image point counts differ");
    }
    if (model.size() < 4) {
        throw Error(ErrorCode::InvalidArgument, "PnP needs at least 4 correspondences");
    }
}

} // namespace

double reprojection_rms(const HeadPose& pose, std::span<const Vec3> model_points,
                        std::span<const Vec2> image_points, const CameraIntrinsics& camera)
{
    if (model_points.size() != image_points.size() || model_points.empty()) {
        throw Error(ErrorCode::InvalidArgument, "model and image point counts differ");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < model_points.size(); ++i) {
        sum += (project(camera, pose.apply(model_points[i])) - image_points[i]).squaredNorm();
    }
    return std::sqrt(sum / static_cast<double>(model_points.size()));
}

PnPResult solve_pnp(std::span<const Vec3> model_points, std::span<const Vec2> image_points,
                    const CameraIntrinsics& camera, const PnPConfig& config,
                    const std::optional<HeadPose>& initial)
{
    check_inputs(model_points, image_points);
    const Correspondences c{model_points, image_points, camera};

    Vec3 centroid = Vec3::Zero();
    for (const auto& X : model_points) {
        centroid += X;
    }
    centroid /= static_cast<double>(model_points.size());
    Eigen::MatrixXd centered(3, static_cast<Eigen::Index>(model_points.size()));
    for (std::size_t i = 0; i < model_points.size(); ++i) {
        centered.col(static_cast<Eigen::Index>(i)) = model_points[i] - centroid;
    }
    const Vec3 sv = Eigen::JacobiSVD<Eigen::MatrixXd>(centered).singularValues();
    if (!(sv(0) > 0.0) || sv(1) < 1e-6 * sv(0)) {
        throw Error(ErrorCode::DegenerateConfiguration, "model points are collinear");
    }

    if (initial) {
        return refine(c, initial->R, initial->t, config);
    }

    std::vector<Candidate> candidates =
        grid_candidates(c, config.grid_step_deg, config.refine_candidates);
    if (model_points.size() >= 6 && sv(2) > 0.05 * sv(0)) {
        if (auto dlt = dlt_candidate(c)) {
            candidates.push_back(*dlt);
        }
    }
    if (candidates.empty()) {
        throw Error(ErrorCode::DegenerateConfiguration,
                    "no orientation places all model points in front of the camera");
    }

    std::optional<PnPResult> best;
    for (const auto& cand : candidates) {
        PnPResult r = refine(c, cand.R, cand.t, config);
        if (!best || r.rms_reprojection_error < best->rms_reprojection_error) {
            best = r;
        }
    }
    return *best;
}

} // namespace gazesynth
