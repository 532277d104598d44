#include "ricsim/channel.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "ricsim/rng.hpp"

namespace ricsim {

namespace {

constexpr double kSpeedOfLight = 299792458.0;

double checked_distance(const Eigen::Vector3d& a, const Eigen::Vector3d& b) {
    const double d = (a - b).norm();
    if (d <= 0.0) throw std::invalid_argument("draw_channels: coincident positions");
    return d;
}

std::complex<double> distance_phase(double d, double wavelength) {
    // keep the argument small before multiplying by 2*pi
    const double cycles = std::fmod(d / wavelength, 1.0);
    return std::polar(1.0, -2.0 * M_PI * cycles);
}

ScalarLink make_scalar(Philox& rng, double d, double kappa, double beta, double ref_gain,
                       double wavelength) {
    ScalarLink link;
    link.kappa = kappa;
    link.amp = std::sqrt(ref_gain * std::pow(d, -beta));
    link.los = distance_phase(d, wavelength);
    link.nlos = rng.cgaussian();
    link.total = compose(link);
    return link;
}

VectorLink make_vector(Philox& rng, const Eigen::Vector3d& array_pos,
                       const Eigen::Vector3d& endpoint, int elements, double kappa,
                       double beta, double ref_gain, double wavelength) {
    VectorLink link;
    const double d = checked_distance(array_pos, endpoint);
    link.kappa = kappa;
    link.amp = std::sqrt(ref_gain * std::pow(d, -beta));
    link.los = distance_phase(d, wavelength) * los_steering(array_pos, endpoint, elements);
    link.nlos.resize(elements);
    for (int l = 0; l < elements; ++l) link.nlos[l] = rng.cgaussian();
    link.total = compose(link);
    return link;
}

}  // namespace

std::complex<double> compose(const ScalarLink& link) {
    const double w_los = std::sqrt(link.kappa / (1.0 + link.kappa));
    const double w_nlos = std::sqrt(1.0 / (1.0 + link.kappa));
    return link.amp * (w_los * link.los + w_nlos * link.nlos);
}

Eigen::VectorXcd compose(const VectorLink& link) {
    const double w_los = std::sqrt(link.kappa / (1.0 + link.kappa));
    const double w_nlos = std::sqrt(1.0 / (1.0 + link.kappa));
    return link.amp * (w_los * link.los + w_nlos * link.nlos);
}

Eigen::VectorXcd los_steering(const Eigen::Vector3d& array_pos,
                              const Eigen::Vector3d& endpoint, int elements) {
    const Eigen::Vector3d u = endpoint - array_pos;
    if (u.norm() <= 0.0) throw std::invalid_argument("los_steering: coincident positions");
    const double azimuth = std::atan2(u.y(), u.x());
    Eigen::VectorXcd out(elements);
    const double step = -M_PI * std::sin(azimuth);
    for (int l = 0; l < elements; ++l) out[l] = std::polar(1.0, step * l);
    return out;
}

ChannelSet draw_channels(const Placement& placement, const SystemParams& params,
                         std::uint64_t seed) {
    const int m_count = static_cast<int>(placement.cv_pos.size());
    const int n_count = static_cast<int>(placement.v2v_tx_pos.size());
    const int elements = params.element_count;
    const double wavelength = kSpeedOfLight / params.carrier_hz;
    const double g0 = params.ref_gain;

    ChannelSet ch;

    Philox rng_cv_bs(seed, substream(streams::channel, 0));
    for (int m = 0; m < m_count; ++m) {
        const double d = checked_distance(placement.cv_pos[m], placement.bs_pos);
        ch.cv_bs.push_back(make_scalar(rng_cv_bs, d, params.kappa.cv_bs,
                                       params.beta_direct, g0, wavelength));
    }

    Philox rng_v2v(seed, substream(streams::channel, 1));
    for (int n = 0; n < n_count; ++n) {
        const double d = checked_distance(placement.v2v_tx_pos[n], placement.v2v_rx_pos[n]);
        ch.v2v.push_back(make_scalar(rng_v2v, d, params.kappa.v2v,
                                     params.beta_direct, g0, wavelength));
    }

    Philox rng_cv_rx(seed, substream(streams::channel, 2));
    ch.cv_rx.resize(m_count);
    for (int m = 0; m < m_count; ++m) {
        for (int n = 0; n < n_count; ++n) {
            const double d = checked_distance(placement.cv_pos[m], placement.v2v_rx_pos[n]);
            ch.cv_rx[m].push_back(make_scalar(rng_cv_rx, d, params.kappa.cv_rx,
                                              params.beta_direct, g0, wavelength));
        }
    }

    Philox rng_tx_bs(seed, substream(streams::channel, 3));
    for (int n = 0; n < n_count; ++n) {
        const double d = checked_distance(placement.v2v_tx_pos[n], placement.bs_pos);
        ch.tx_bs.push_back(make_scalar(rng_tx_bs, d, params.kappa.tx_bs,
                                       params.beta_direct, g0, wavelength));
    }

    Philox rng_cv_rics(seed, substream(streams::channel, 4));
    for (int m = 0; m < m_count; ++m) {
        ch.cv_rics.push_back(make_vector(rng_cv_rics, placement.rics_pos,
                                         placement.cv_pos[m], elements,
                                         params.kappa.cv_rics, params.beta_rics, g0,
                                         wavelength));
    }

    Philox rng_rics_bs(seed, substream(streams::channel, 5));
    ch.rics_bs = make_vector(rng_rics_bs, placement.rics_pos, placement.bs_pos, elements,
                             params.kappa.rics_bs, params.beta_rics, g0, wavelength);

    Philox rng_rics_rx(seed, substream(streams::channel, 6));
    for (int n = 0; n < n_count; ++n) {
        ch.rics_rx.push_back(make_vector(rng_rics_rx, placement.rics_pos,
                                         placement.v2v_rx_pos[n], elements,
                                         params.kappa.rics_rx, params.beta_rics, g0,
                                         wavelength));
    }
    return ch;
}

namespace {

void write_scalar(std::ofstream& out, const char* name, int i, int j, const ScalarLink& s) {
    out << name << ',' << i << ',' << j << ",-1," << s.total.real() << ',' << s.total.imag()
        << '\n';
}

void write_vector(std::ofstream& out, const char* name, int i, const VectorLink& v) {
    for (Eigen::Index l = 0; l < v.total.size(); ++l) {
        out << name << ',' << i << ",-1," << l << ',' << v.total[l].real() << ','
            << v.total[l].imag() << '\n';
    }
}

}  // namespace

void dump_channels_csv(const ChannelSet& channels, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open channel dump file: " + path);
    out << "link,i,j,l,re,im\n";
    for (size_t m = 0; m < channels.cv_bs.size(); ++m)
        write_scalar(out, "cv_bs", static_cast<int>(m), -1, channels.cv_bs[m]);
    for (size_t n = 0; n < channels.v2v.size(); ++n)
        write_scalar(out, "v2v", static_cast<int>(n), -1, channels.v2v[n]);
    for (size_t m = 0; m < channels.cv_rx.size(); ++m)
        for (size_t n = 0; n < channels.cv_rx[m].size(); ++n)
            write_scalar(out, "cv_rx", static_cast<int>(m), static_cast<int>(n),
                         channels.cv_rx[m][n]);
    for (size_t n = 0; n < channels.tx_bs.size(); ++n)
        write_scalar(out, "tx_bs", static_cast<int>(n), -1, channels.tx_bs[n]);
    for (size_t m = 0; m < channels.cv_rics.size(); ++m)
        write_vector(out, "cv_rics", static_cast<int>(m), channels.cv_rics[m]);
    write_vector(out, "rics_bs", 0, channels.rics_bs);
    for (size_t n = 0; n < channels.rics_rx.size(); ++n)
        write_vector(out, "rics_rx", static_cast<int>(n), channels.rics_rx[n]);
}

}  // namespace ricsim
