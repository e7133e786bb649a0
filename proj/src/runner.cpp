#include "pslab/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "pslab/association.hpp"
#include "pslab/charfn.hpp"
#include "pslab/counts.hpp"
#include "pslab/io.hpp"
#include "pslab/measure.hpp"
#include "pslab/rng.hpp"

namespace pslab {

namespace {

using nlohmann::json;

constexpr int kFkgPairs = 32;

std::string hex64(std::uint64_t v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::string upset_desc(const UpSet& u) {
    return "atoms:0x" + hex64(u.atoms).substr(16 - 8);
}

std::string seeds_desc(const MonotoneIndicator& ind) {
    std::string s = "seeds:";
    for (std::size_t i = 0; i < ind.seeds.size(); ++i) {
        if (i) s += ';';
        char buf[32];
        std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(ind.seeds[i]));
        s += buf;
    }
    return s;
}

std::map<std::string, std::string> run_sigma_sweep(const ExperimentConfig& cfg) {
    CsvWriter csv({"n", "sigma", "nd_sigma"});
    for (const DecayRow& row : decay_diagnostic(cfg.spec, cfg.n_values))
        csv.row({std::to_string(row.n), format_real(row.sigma), format_real(row.nd_sigma)});
    return {{"decay.csv", csv.content()}};
}

std::map<std::string, std::string> run_charfn(const ExperimentConfig& cfg) {
    CsvWriter csv({"t", "n", "i1_re", "i1_im", "phi_re", "phi_im", "bound_tight", "bound_coarse",
                   "mc_re", "mc_im", "mc_se", "exact_re", "exact_im"});
    std::uint64_t cell = 0;
    for (std::int64_t n : cfg.n_values) {
        const FieldSpec spec_n = cfg.spec.with_scale(n);
        for (double t : cfg.t_values) {
            const std::uint64_t cell_seed = derive_stream_seed(cfg.master_seed, cell++);
            const CharfnReport rep = charfn_report(t, *cfg.f, spec_n, cfg.replicates, cell_seed);
            csv.row({format_real(t), std::to_string(n), format_real(rep.i1.real()),
                     format_real(rep.i1.imag()), format_real(rep.phi.real()),
                     format_real(rep.phi.imag()), format_real(rep.bound_tight),
                     format_real(rep.bound_coarse), format_real(rep.mc.value.real()),
                     format_real(rep.mc.value.imag()), format_real(rep.mc.se),
                     rep.exact ? format_real(rep.exact->real()) : std::string{},
                     rep.exact ? format_real(rep.exact->imag()) : std::string{}});
        }
    }
    return {{"charfn.csv", csv.content()}};
}

std::map<std::string, std::string> run_count_fit(const ExperimentConfig& cfg) {
    if (!lattice_box(*cfg.box, cfg.spec.scale()))
        throw feasibility_error("count-fit box contains no lattice sites at this scale (box)");
    const CountHistogram hist = count_experiment(cfg.spec, *cfg.box, cfg.replicates, cfg.master_seed);
    const double le_vol = lambda_eff_volume(cfg.spec, *cfg.box);
    const double le_lat = lambda_eff_lattice(cfg.spec, *cfg.box);
    const double mass = cfg.spec.limit_mass();
    const ReferenceKind natural =
        cfg.spec.kind() == FieldKind::or_field ? ReferenceKind::compound2 : ReferenceKind::poisson;

    CsvWriter csv({"k", "count", "empirical_p", "reference_p"});
    const auto r = static_cast<double>(hist.replicates);
    for (std::int64_t k = 0; k <= hist.max_count(); ++k) {
        const auto it = hist.counts.find(k);
        const std::int64_t c = it == hist.counts.end() ? 0 : it->second;
        csv.row({std::to_string(k), std::to_string(c), format_real(static_cast<double>(c) / r),
                 format_real(reference_pmf(natural, le_lat, k))});
    }

    json summary;
    summary["replicates"] = hist.replicates;
    summary["lambda_eff_volume"] = le_vol;
    summary["lambda_eff_lattice"] = le_lat;
    summary["tv_poisson_volume"] = tv_distance(hist, ReferenceKind::poisson, mass * le_vol);
    summary["tv_poisson_lattice"] = tv_distance(hist, ReferenceKind::poisson, mass * le_lat);
    summary["tv_compound2_volume"] = tv_distance(hist, ReferenceKind::compound2, le_vol);
    summary["tv_compound2_lattice"] = tv_distance(hist, ReferenceKind::compound2, le_lat);
    summary["parity_odd_fraction"] = odd_fraction(hist);
    const auto moments = factorial_moments(hist, 4);
    for (int rr = 1; rr <= 4; ++rr) {
        summary["m" + std::to_string(rr)] = moments[static_cast<std::size_t>(rr - 1)].value;
        summary["m" + std::to_string(rr) + "_se"] = moments[static_cast<std::size_t>(rr - 1)].se;
    }
    return {{"histogram.csv", csv.content()}, {"summary.json", summary.dump(2) + "\n"}};
}

std::map<std::string, std::string> run_fkg_check(const ExperimentConfig& cfg) {
    const auto window = lattice_box(*cfg.box, cfg.spec.scale());
    if (!window)
        throw feasibility_error("fkg-check box contains no lattice sites at this scale (box)");
    if (window->size() > kEnumerationCap)
        throw feasibility_error("fkg-check box yields more than 24 sites at this scale (box)");
    const std::vector<Point> sites = window_points(*window);
    const int m = static_cast<int>(sites.size());

    CsvWriter csv({"mode", "pair_id", "f_desc", "g_desc", "cov", "se", "verdict"});
    json summary;
    summary["sites"] = m;

    if (m <= kExactFkgMaxCoords) {
        bool feasible = true;
        try {
            const JointDistribution dist = window_distribution(cfg.spec, sites);
            const std::vector<UpSet> upsets = enumerate_upsets(m);
            std::vector<double> prob(upsets.size());
            for (std::size_t i = 0; i < upsets.size(); ++i) {
                double p = 0.0;
                for (int a = 0; a < (1 << m); ++a)
                    if (upsets[i].contains(static_cast<unsigned>(a)))
                        p += dist.probs[static_cast<std::size_t>(a)];
                prob[i] = p;
            }
            for (std::size_t i = 0; i < upsets.size(); ++i)
                for (std::size_t j = 0; j < upsets.size(); ++j) {
                    double inter = 0.0;
                    const std::uint32_t both = upsets[i].atoms & upsets[j].atoms;
                    for (int a = 0; a < (1 << m); ++a)
                        if (both >> a & 1) inter += dist.probs[static_cast<std::size_t>(a)];
                    const double cov = inter - prob[i] * prob[j];
                    csv.row({"exact", std::to_string(i) + "_" + std::to_string(j),
                             upset_desc(upsets[i]), upset_desc(upsets[j]), format_real(cov),
                             std::string{}, cov >= -kFkgTol ? "ok" : "reject"});
                }
            const FkgCheckResult check = exact_fkg_check(dist);
            summary["exact_min_cov"] = check.min_cov;
            summary["exact_certified"] = check.certified();
            if (check.witness) {
                summary["witness_f"] = upset_desc(check.witness->first);
                summary["witness_g"] = upset_desc(check.witness->second);
            }
        } catch (const feasibility_error&) {
            feasible = false;
        }
        summary["exact_feasible"] = feasible;
    } else {
        summary["exact_feasible"] = false;
    }

    const auto mc = mc_fkg_check(cfg.spec, sites, kFkgPairs, cfg.replicates, cfg.master_seed);
    double mc_min_cov = 0.0, mc_min_se = 0.0;
    bool mc_all_ok = true;
    for (std::size_t i = 0; i < mc.size(); ++i) {
        const bool ok = mc[i].cov >= -4.0 * mc[i].se - kFkgTol;
        mc_all_ok = mc_all_ok && ok;
        if (i == 0 || mc[i].cov < mc_min_cov) {
            mc_min_cov = mc[i].cov;
            mc_min_se = mc[i].se;
        }
        csv.row({"mc", "mc_" + std::to_string(i), seeds_desc(mc[i].f), seeds_desc(mc[i].g),
                 format_real(mc[i].cov), format_real(mc[i].se), ok ? "ok" : "suspect"});
    }
    summary["mc_pairs"] = static_cast<int>(mc.size());
    summary["mc_replicates"] = cfg.replicates;
    summary["mc_min_cov"] = mc_min_cov;
    summary["mc_min_cov_se"] = mc_min_se;
    summary["mc_all_ok"] = mc_all_ok;

    return {{"fkg.csv", csv.content()}, {"summary.json", summary.dump(2) + "\n"}};
}

}  // namespace

std::vector<std::string> run_experiment(const ExperimentConfig& config) {
    std::map<std::string, std::string> files;
    switch (config.experiment) {
        case ExperimentKind::sigma_sweep: files = run_sigma_sweep(config); break;
        case ExperimentKind::charfn: files = run_charfn(config); break;
        case ExperimentKind::count_fit: files = run_count_fit(config); break;
        case ExperimentKind::fkg_check: files = run_fkg_check(config); break;
    }

    const std::string canonical = canonical_config(config);
    json manifest;
    manifest["artifact_version"] = kVersion;
    manifest["experiment"] = to_string(config.experiment);
    manifest["config_hash"] = hex64(fnv1a64(canonical));
    manifest["master_seed"] = config.master_seed;
    manifest["replicates"] = config.replicates;
    json outputs = json::array();
    for (const auto& [name, content] : files)
        outputs.push_back({{"name", name}, {"fnv1a64", hex64(fnv1a64(content))}});
    manifest["outputs"] = outputs;

    namespace fs = std::filesystem;
    fs::create_directories(config.out_dir);
    std::vector<std::string> written;
    for (const auto& [name, content] : files) {
        const std::string path = (fs::path(config.out_dir) / name).string();
        write_file(path, content);
        written.push_back(path);
    }
    const std::string manifest_path = (fs::path(config.out_dir) / "manifest.json").string();
    write_file(manifest_path, manifest.dump(2) + "\n");
    written.push_back(manifest_path);
    return written;
}

}  // namespace pslab
