#include "tvreg/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "tvreg/error.hpp"

namespace tvreg {

namespace {

bool contains(const IndexSet& set, std::size_t k) {
    return std::find(set.begin(), set.end(), k) != set.end();
}

bool subset(const IndexSet& a, const IndexSet& b) {
    return std::all_of(a.begin(), a.end(), [&](std::size_t k) { return contains(b, k); });
}

bool same(const IndexSet& a, const IndexSet& b) { return subset(a, b) && subset(b, a); }

}  // namespace

double rase(std::span<const double> estimates, std::span<const double> truth) {
    if (estimates.size() != truth.size())
        throw LengthMismatch("rase: " + std::to_string(estimates.size()) + " estimates vs " +
                             std::to_string(truth.size()) + " truth values");
    if (estimates.empty()) return 0.0;
    double ss = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        const double d = estimates[i] - truth[i];
        ss += d * d;
    }
    return std::sqrt(ss / static_cast<double>(estimates.size()));
}

double rase_phi(const TvarPath& path, const CoefficientModel& model, std::size_t k) {
    if (k < 1 || k > path.p) throw InvalidArgument("lag " + std::to_string(k) + " outside the estimated path");
    std::vector<double> estimate(path.size());
    std::vector<double> truth(path.size());
    for (std::size_t g = 0; g < path.size(); ++g) {
        estimate[g] = path.phi(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(g));
        truth[g] = k <= model.order() ? model.phi[k - 1](path.grid[g]) : 0.0;
    }
    return rase(estimate, truth);
}

std::string to_string(Fit fit) {
    switch (fit) {
        case Fit::Underfitted: return "under";
        case Fit::Correct: return "correct";
        case Fit::Overfitted: return "over";
    }
    return "?";
}

SelectionOutcome classify(const IndexSet& s1_hat, const IndexSet& s2_hat, const StructureTruth& truth) {
    SelectionOutcome out;
    if (!subset(truth.s1, s1_hat))
        out.vs = Fit::Underfitted;
    else
        out.vs = same(truth.s1, s1_hat) ? Fit::Correct : Fit::Overfitted;

    if (same(truth.s1, s1_hat) && same(truth.s2, s2_hat))
        out.vs_ci = Fit::Correct;
    else if (!subset(truth.s1, s1_hat) || !subset(truth.s2, s2_hat))
        out.vs_ci = Fit::Underfitted;
    else
        out.vs_ci = Fit::Overfitted;
    return out;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.count = values.size();
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        s.sd_defined = true;
    }
    return s;
}

std::size_t constant_lag(const CoefficientModel& model) {
    for (std::size_t k : model.truth.s1)
        if (!contains(model.truth.s2, k)) return k;
    return 0;
}

ExperimentReport aggregate(std::vector<ReplicationRecord> records, const CoefficientModel& model, double sigma,
                           std::size_t T) {
    if (records.empty()) throw EmptyRecords("no replication records to aggregate");
    std::sort(records.begin(), records.end(),
              [](const ReplicationRecord& a, const ReplicationRecord& b) { return a.index < b.index; });

    ExperimentReport report;
    report.model = model_name(model.label);
    report.sigma = sigma;
    report.T = T;
    report.replications = records.size();

    std::vector<double> pre, ref, orc, sel, constants;
    std::vector<std::vector<double>> phi;
    std::array<std::vector<double>, 3> probe_pre, probe_ref;
    std::array<std::size_t, 3> vs{}, vs_ci{};
    std::size_t selected = 0;
    report.constant_lag = constant_lag(model);
    if (report.constant_lag > 0) report.constant_truth = model.phi[report.constant_lag - 1](0.5);

    for (const auto& r : records) {
        if (!r.ok) {
            ++report.failures;
            continue;
        }
        pre.push_back(r.rase_preliminary);
        for (std::size_t i = 0; i < 3; ++i)
            if (std::isfinite(r.probe_preliminary[i])) probe_pre[i].push_back(r.probe_preliminary[i]);
        if (r.has_known) {
            ref.push_back(r.rase_refined);
            orc.push_back(r.rase_oracle);
            for (std::size_t i = 0; i < 3; ++i)
                if (std::isfinite(r.probe_refined[i])) probe_ref[i].push_back(r.probe_refined[i]);
        }
        if (r.has_selection) {
            ++selected;
            sel.push_back(r.rase_refined_selected);
            if (phi.size() < r.rase_phi.size()) phi.resize(r.rase_phi.size());
            for (std::size_t k = 0; k < r.rase_phi.size(); ++k) phi[k].push_back(r.rase_phi[k]);
            ++vs[static_cast<std::size_t>(r.selection.vs)];
            ++vs_ci[static_cast<std::size_t>(r.selection.vs_ci)];
            if (r.constant_estimate) constants.push_back(*r.constant_estimate);
        }
    }

    report.preliminary = summarize(pre);
    report.refined = summarize(ref);
    report.oracle = summarize(orc);
    report.refined_selected = summarize(sel);
    for (const auto& v : phi) report.phi.push_back(summarize(v));
    for (std::size_t c = 0; c < 3; ++c) {
        report.vs[c] = selected ? static_cast<double>(vs[c]) / static_cast<double>(selected) : 0.0;
        report.vs_ci[c] = selected ? static_cast<double>(vs_ci[c]) / static_cast<double>(selected) : 0.0;
    }
    const Summary constant = summarize(constants);
    report.constant_count = constant.count;
    if (constant.count > 0) {
        report.constant_bias = constant.mean - report.constant_truth;
        report.constant_se = constant.sd;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        report.probe_preliminary[i] = summarize(probe_pre[i]);
        report.probe_refined[i] = summarize(probe_ref[i]);
    }
    report.records = std::move(records);
    return report;
}

std::pair<double, double> skewness_kurtosis(std::span<const double> values) {
    const Summary s = summarize(values);
    if (s.count < 2) return {0.0, 0.0};
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - s.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(s.count);
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 == 0.0) return {0.0, 0.0};
    return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

}  // namespace tvreg
