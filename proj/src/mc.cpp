#include "pdc/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <set>
#include <thread>

#include "pdc/random.hpp"

namespace pdc::mc {

namespace {

constexpr std::uint64_t kChunk = 1u << 15;

double beam_detuning(const jsa::ContourRoot& r, jsa::Beam beam) {
    return beam == jsa::Beam::kSignal ? r.nu_s : r.nu_i;
}

bool is_excluded(const ObservationSet& obs, jsa::Beam beam, Branch branch) {
    return std::any_of(obs.excluded.begin(), obs.excluded.end(),
                       [&](const ExcludedBranch& e) { return e.beam == beam && e.branch == branch; });
}

// params are normalized so that |kappa_i| = 1.
bool accept_normalized(const jsa::DispersionParams& params, double delta_offset, const ObservationSet& obs,
                       const McConfig& config) {
    if (config.signal_group_index_above_idler && !(params.kappa_s / params.kappa_i < 1.0)) {
        return false;
    }
    const double omega0 = wavelength_to_angular_frequency(obs.degeneracy).value;
    for (const auto& o : obs.observations) {
        const double delta = wavelength_to_angular_frequency(o.pump).value - 2.0 * omega0 + delta_offset;
        std::vector<jsa::ContourRoot> roots;
        try {
            roots = jsa::marginal_contour_roots(params, {delta}, config.drop_Kp);
        } catch (const DegenerateInputError&) {
            return false;
        }
        std::array<double, 2> nu{};
        const std::size_t n_roots = roots.size();
        for (std::size_t k = 0; k < n_roots; ++k) nu[k] = beam_detuning(roots[k], o.beam);
        if (n_roots == 2 && nu[0] > nu[1]) std::swap(nu[0], nu[1]);

        // Every peak needs a root inside its errorbar.
        for (const auto& p : o.peaks) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < n_roots; ++k) nearest = std::min(nearest, std::abs(nu[k] - p.center_detuning));
            if (!(nearest <= 0.5 * p.fwhm_detuning)) return false;
        }
        // Every recorded, non-excluded root needs a peak.
        for (std::size_t k = 0; k < n_roots; ++k) {
            if (n_roots == 2 && is_excluded(obs, o.beam, k == 0 ? Branch::kLower : Branch::kUpper)) continue;
            if (!o.observes(nu[k], obs.degeneracy)) continue;
            const bool matched = std::any_of(o.peaks.begin(), o.peaks.end(), [&](const fit::MarginalPeak& p) {
                return std::abs(nu[k] - p.center_detuning) <= 0.5 * p.fwhm_detuning;
            });
            if (!matched) return false;
        }
    }
    return true;
}

double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

} // namespace

void ObservationSet::validate() const {
    std::set<double> pumps;
    for (const auto& o : observations) pumps.insert(o.pump.value);
    if (pumps.size() < 2) {
        throw DomainError("observation set needs at least two distinct pump wavelengths");
    }
    if (!(degeneracy.value > 0.0)) {
        throw DomainError("observation set needs a positive degeneracy wavelength");
    }
}

void McConfig::validate() const {
    if (n_runs < 1) throw DomainError("mc config: n_runs must be at least 1");
    for (const auto& r : priors.as_array()) {
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi < r.lo) {
            throw DomainError("mc config: each prior range must satisfy lo <= hi");
        }
    }
    if (histogram_bins < 1) throw DomainError("mc config: histogram_bins must be at least 1");
}

McSample draw_sample(const McPriors& priors, std::uint64_t seed, std::uint64_t index) {
    const CounterRng rng(seed, 0x6d63);
    const auto ranges = priors.as_array();
    std::array<double, kParameterCount> v{};
    for (std::size_t j = 0; j < kParameterCount; ++j) {
        v[j] = ranges[j].draw(rng.uniform(kParameterCount * index + j));
    }
    McSample s;
    s.kappa_ratio = v[0];
    s.Ks_norm = v[1];
    s.Ki_norm = v[2];
    s.delta_offset = v[3];
    s.index = index;
    return s;
}

bool accept_sample(const McSample& sample, const ObservationSet& obs, const McConfig& config) {
    const bool finite = std::isfinite(sample.kappa_ratio) && std::isfinite(sample.Ks_norm) &&
                        std::isfinite(sample.Ki_norm) && std::isfinite(sample.delta_offset);
    if (!finite) return false;
    return accept_normalized(sample.normalized_params(config.drop_Kp ? 0.0 : config.Kp_norm), sample.delta_offset,
                             obs, config);
}

bool accept_params(const jsa::DispersionParams& params, double delta_offset, const ObservationSet& obs,
                   const McConfig& config) {
    params.validate();
    const double scale = std::abs(params.kappa_i);
    const jsa::DispersionParams normalized{params.kappa_s / scale, params.kappa_i / scale, params.K_s / scale,
                                           params.K_i / scale, config.drop_Kp ? 0.0 : params.K_p / scale};
    return accept_normalized(normalized, delta_offset, obs, config);
}

unsigned worker_count_from_env() {
    if (const char* env = std::getenv("PDC_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

McPosterior run_mc(const McConfig& config, const ObservationSet& obs) {
    config.validate();
    obs.validate();

    const std::uint64_t n_chunks = (config.n_runs + kChunk - 1) / kChunk;
    std::vector<std::vector<McSample>> accepted(n_chunks);
    std::atomic<std::uint64_t> next{0};
    const auto work = [&] {
        for (std::uint64_t c = next++; c < n_chunks; c = next++) {
            const std::uint64_t begin = c * kChunk;
            const std::uint64_t end = std::min(config.n_runs, begin + kChunk);
            for (std::uint64_t i = begin; i < end; ++i) {
                McSample s = draw_sample(config.priors, config.seed, i);
                if (accept_sample(s, obs, config)) {
                    s.accepted = true;
                    accepted[c].push_back(s);
                }
            }
        }
    };

    const unsigned requested = config.threads ? config.threads : worker_count_from_env();
    const auto n_workers = static_cast<unsigned>(std::min<std::uint64_t>(requested, n_chunks));
    if (n_workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(work);
    }

    McPosterior post;
    post.n_runs = config.n_runs;
    post.seed = config.seed;
    post.drop_Kp = config.drop_Kp;
    post.Kp_norm = config.Kp_norm;
    for (auto& chunk : accepted) {
        post.samples.insert(post.samples.end(), chunk.begin(), chunk.end());
    }
    if (post.samples.empty()) {
        throw EmptyPosteriorError("run_mc: no sample accepted out of " + std::to_string(config.n_runs) +
                                  "; widen the prior ranges or check the observation errorbars");
    }
    summarize(post, config.priors, config.histogram_bins);
    return post;
}

void summarize(McPosterior& post, const McPriors& priors, std::size_t bins) {
    const auto ranges = priors.as_array();
    for (std::size_t j = 0; j < kParameterCount; ++j) {
        const auto& r = ranges[j];
        Histogram h;
        h.edges.resize(bins + 1);
        h.counts.assign(bins, 0);
        const double width = (r.hi - r.lo) / static_cast<double>(bins);
        for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = r.lo + width * static_cast<double>(b);
        h.edges[bins] = r.hi;

        double sum = 0.0;
        for (const auto& s : post.samples) {
            const double v = s.values()[j];
            std::size_t b = 0;
            if (width > 0.0) {
                const double f = std::floor((v - r.lo) / width);
                b = f < 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(f));
            }
            ++h.counts[b];
            sum += v;
        }
        const double n = static_cast<double>(post.samples.size());
        ParameterEstimate e;
        e.mean = n > 0 ? sum / n : 0.0;
        double ss = 0.0;
        for (const auto& s : post.samples) ss += (s.values()[j] - e.mean) * (s.values()[j] - e.mean);
        e.std = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        const auto best = static_cast<std::size_t>(
            std::distance(h.counts.begin(), std::max_element(h.counts.begin(), h.counts.end())));
        e.mode = 0.5 * (h.edges[best] + h.edges[best + 1]);
        post.histograms[j] = std::move(h);
        post.estimates[j] = e;
    }
}

DerivedReport derived_quantities(const McPosterior& post, const Measured& kappa_i_abs, VacuumWavelength degeneracy,
                                 std::span<const double> pump_nm) {
    if (post.samples.empty()) {
        throw EmptyPosteriorError("derived_quantities: empty posterior");
    }
    DerivedReport report;
    const auto& ratio = post.estimates[0];
    const double c_k = kSpeedOfLight * kappa_i_abs.value;
    report.delta_ng = Measured(c_k * (1.0 - ratio.mode),
                               std::hypot(c_k * ratio.std, kSpeedOfLight * (1.0 - ratio.mode) * kappa_i_abs.sigma));

    std::vector<double> deg_angles;
    deg_angles.reserve(post.samples.size());
    for (const auto& s : post.samples) {
        deg_angles.push_back(jsa::phasematching_tilt(s.normalized_params(), {0.0}, {0.0}, {0.0}).angle_deg);
    }
    const double mode_angle = jsa::phasematching_tilt({-ratio.mode, -1.0, 0.0, 0.0, 0.0}, {0.0}, {0.0}, {0.0}).angle_deg;
    double mean = 0.0;
    for (double a : deg_angles) mean += a;
    mean /= static_cast<double>(deg_angles.size());
    double ss = 0.0;
    for (double a : deg_angles) ss += (a - mean) * (a - mean);
    report.tilt_at_degeneracy_deg =
        Measured(mode_angle, deg_angles.size() > 1 ? std::sqrt(ss / static_cast<double>(deg_angles.size() - 1)) : 0.0);

    const double omega0 = wavelength_to_angular_frequency(degeneracy).value;
    for (double pnm : pump_nm) {
        const double nominal = wavelength_to_angular_frequency(VacuumWavelength::from_nm(pnm)).value - 2.0 * omega0;
        std::array<std::vector<double>, 3> angles;  // lower, upper, single
        for (const auto& s : post.samples) {
            const double delta = nominal + s.delta_offset;
            const auto params = s.normalized_params(post.drop_Kp ? 0.0 : post.Kp_norm);
            std::vector<jsa::ContourRoot> roots;
            try {
                roots = jsa::marginal_contour_roots(params, {delta}, post.drop_Kp);
            } catch (const DegenerateInputError&) {
                continue;
            }
            for (std::size_t k = 0; k < roots.size(); ++k) {
                const std::size_t slot = roots.size() == 1 ? 2 : k;
                try {
                    angles[slot].push_back(
                        jsa::phasematching_tilt(params, {roots[k].nu_s}, {roots[k].nu_i}, {delta}).angle_deg);
                } catch (const jsa::SingularTiltError&) {
                }
            }
        }
        static constexpr std::array<const char*, 3> kNames{"lower", "upper", "single"};
        for (std::size_t slot = 0; slot < 3; ++slot) {
            if (angles[slot].empty()) continue;
            TiltBand band;
            band.pump_nm = pnm;
            band.branch = kNames[slot];
            band.n = angles[slot].size();
            band.median_deg = percentile(angles[slot], 0.5);
            band.p16_deg = percentile(angles[slot], 0.16);
            band.p84_deg = percentile(angles[slot], 0.84);
            report.tilt_curve.push_back(band);
        }
    }
    return report;
}

ObservationSet synthesize_observations(const McSample& truth, const SynthesisSetup& setup) {
    const auto params = jsa::DispersionParams::from_normalized(-setup.kappa_i_abs, truth.kappa_ratio, truth.Ks_norm,
                                                               truth.Ki_norm);
    const auto spec = jsa::WaveguideSpec::degenerate(setup.length_um, 0.179, setup.degeneracy);
    const double omega0 = spec.omega0_s.value;

    ObservationSet set;
    set.degeneracy = setup.degeneracy;
    set.excluded = setup.excluded;

    Spectrum s;
    s.kind = AxisKind::kWavelengthUm;
    s.axis.resize(setup.points);
    const double step = (setup.band.hi_um - setup.band.lo_um) / static_cast<double>(setup.points - 1);
    for (std::size_t k = 0; k < setup.points; ++k) s.axis[k] = setup.band.lo_um + step * static_cast<double>(k);
    s.intensity.resize(setup.points);

    for (double pnm : setup.pump_nm) {
        const auto pump = VacuumWavelength::from_nm(pnm);
        const double delta = wavelength_to_angular_frequency(pump).value - spec.omega0_p().value + truth.delta_offset;
        for (const auto beam : {jsa::Beam::kSignal, jsa::Beam::kIdler}) {
            for (std::size_t k = 0; k < setup.points; ++k) {
                const double nu = kTwoPi * kSpeedOfLight / s.axis[k] - omega0;
                s.intensity[k] = jsa::marginal_intensity(spec, params, {delta}, {nu}, beam);
            }
            auto o = fit::observation_from_spectrum(s, pump, setup.degeneracy, beam, setup.mask, setup.observation);
            if (o.peaks.size() == 2) {
                for (const auto& e : setup.excluded) {
                    if (e.beam != beam) continue;
                    o.peaks.erase(o.peaks.begin() + (e.branch == Branch::kLower ? 0 : 1));
                    break;
                }
            }
            set.observations.push_back(std::move(o));
        }
    }
    return set;
}

} // namespace pdc::mc
