// Command-line front end. Every command writes one JSON document to stdout
// (or --out) and a short human summary to stderr.
//
// Exit codes: 0 verified, 1 verification failed, 2 usage or schema error.

#include "anosov/commuting.hpp"
#include "anosov/cone.hpp"
#include "anosov/crystal.hpp"
#include "anosov/errors.hpp"
#include "anosov/exotic.hpp"
#include "anosov/heisenberg.hpp"
#include "anosov/infratorus.hpp"
#include "anosov/io.hpp"
#include "anosov/spectrum.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using namespace anosov;

namespace {

constexpr int kVerified = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct RunConfig {
    std::string out;
    unsigned precision = 128;
    unsigned seed = 0;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

void emit(const RunConfig& cfg, const json& doc)
{
    const std::string text = doc.dump(2) + "\n";
    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f)
        throw UsageError("cannot write " + cfg.out);
    f << text;
}

json config_json(const RunConfig& cfg) { return {{"precision", cfg.precision}, {"seed", cfg.seed}}; }

RatMatrix read_matrix(const std::string& path)
{
    json j = read_json_file(path);
    if (j.is_object()) {
        if (!j.contains("matrix") || j.size() != 1)
            throw SchemaError(path + ": expected a matrix or {\"matrix\": ...}");
        j = j["matrix"];
    }
    return matrix_from_json(j);
}

AffineMap read_affine(const std::string& path)
{
    json j = read_json_file(path);
    if (j.is_array()) {
        RatMatrix a = matrix_from_json(j);
        if (!a.is_square())
            throw SchemaError(path + ": matrix must be square");
        return AffineMap::linear_map(a);
    }
    return affine_from_json(j);
}

std::string verdict_for(const RatMatrix& m, const SpectralClass& sc)
{
    if (!m.is_integral())
        return "not Anosov (not an integer matrix)";
    const Rational det = determinant(m);
    if (det != 1 && det != -1)
        return "not Anosov (determinant " + to_string(det) + ")";
    if (sc.unit_dim > 0)
        return "not Anosov (unit eigenvalues)";
    return "Anosov, codimension " + std::to_string(sc.codimension);
}

int cmd_check_anosov(const RunConfig& cfg, const std::string& path)
{
    const RatMatrix m = read_matrix(path);
    if (!m.is_square())
        throw UsageError("matrix must be square, got " + std::to_string(m.rows()) + " x " + std::to_string(m.cols()));
    SpectrumOptions opts;
    opts.precision_bits = cfg.precision;
    const SpectralClass sc = classify_spectrum(m, opts);
    const bool anosov = m.is_integral() && is_anosov_matrix(m);
    const std::string verdict = verdict_for(m, sc);
    emit(cfg, {{"command", "check-anosov"},
               {"config", config_json(cfg)},
               {"matrix", to_json(m)},
               {"char_poly", to_json(char_poly(m))},
               {"determinant", to_json(determinant(m))},
               {"spectrum", to_json(sc)},
               {"anosov", anosov},
               {"verdict", verdict}});
    std::cerr << verdict << "\n";
    return anosov ? kVerified : kFailed;
}

int cmd_find_expanding(const RunConfig& cfg, const std::string& group_path, const std::string& map_path,
                       const std::optional<std::string>& scale)
{
    const CrystalGroup gamma = group_from_json(read_json_file(group_path));
    const AffineMap l = read_affine(map_path);
    if (l.dim() != gamma.dim)
        throw SchemaError("map dimension " + std::to_string(l.dim()) + " differs from group dimension " +
                          std::to_string(gamma.dim));
    std::optional<Integer> s;
    if (scale) {
        try {
            s = Integer(*scale);
        } catch (const std::invalid_argument&) {
            throw UsageError("--s must be an integer");
        }
        if (*s < 2)
            throw UsageError("--s must be at least 2");
    }

    json doc = {{"command", "find-expanding"}, {"config", config_json(cfg)}};
    const ValidationReport report = validate_group(gamma);
    doc["group_report"] = to_json(report);
    if (!report.valid) {
        doc["verified"] = false;
        doc["failure"] = {{"stage", "validate_group"}, {"what", report.violation}};
        emit(cfg, doc);
        std::cerr << "invalid group: " << report.violation << "\n";
        return kFailed;
    }
    try {
        const CommutingPair pair = prop3_pipeline(gamma, l, s);
        const std::string check = check_commuting_pair(pair);
        doc["pair"] = to_json(pair);
        doc["verified"] = check.empty();
        if (!check.empty())
            doc["failure"] = {{"stage", "check_commuting_pair"}, {"what", check}};
        emit(cfg, doc);
        if (!check.empty()) {
            std::cerr << "re-check failed: " << check << "\n";
            return kFailed;
        }
        std::cerr << "verified pair: s = " << to_string(pair.s) << ", q = " << pair.q
                  << ", p = " << pair.reduction_exponent << ", exponent = " << pair.exponent << "\n";
        return kVerified;
    } catch (const VerificationError& e) {
        doc["verified"] = false;
        doc["failure"] = {{"stage", e.stage()}, {"what", e.what()}};
        emit(cfg, doc);
        std::cerr << e.what() << "\n";
        return kFailed;
    }
}

int cmd_build_infratorus(const RunConfig& cfg, const std::string& seed_path, std::size_t k, std::size_t s,
                         bool allow_odd)
{
    if (k < 2)
        throw UsageError("--k must be at least 2");
    if (s < 2)
        throw UsageError("--s must be at least 2");
    if (s % 2 == 1) {
        std::cerr << "warning: odd s does not guarantee an orientable result\n";
        if (!allow_odd)
            throw UsageError("odd --s requires --allow-odd");
    }
    const CrystalGroup seed = group_from_json(read_json_file(seed_path));
    json doc = {{"command", "build-infratorus"}, {"config", config_json(cfg)}, {"k", k}, {"s", s}};
    try {
        const AssembledExample ex = assemble_example(seed, k, s);
        doc["report"] = to_json(ex.report);
        doc["group"] = to_json(ex.group);
        doc["anosov"] = to_json(ex.anosov);
        doc["verified"] = true;
        emit(cfg, doc);
        std::cerr << "dimension " << ex.report.dimension << " (mod 4: " << ex.report.dimension_mod4
                  << "), codimension " << ex.report.codimension
                  << (ex.report.orientable ? ", orientable" : ", non-orientable") << "\n";
        return kVerified;
    } catch (const VerificationError& e) {
        doc["verified"] = false;
        doc["failure"] = {{"stage", e.stage()}, {"what", e.what()}};
        emit(cfg, doc);
        std::cerr << e.what() << "\n";
        return kFailed;
    }
}

std::string count(long v) { return v == kNoReturn ? "inf" : std::to_string(v); }

int cmd_cone_certify(const RunConfig& cfg, const std::string& spec_path, std::optional<unsigned> grid,
                     std::optional<unsigned> m_cap, std::optional<double> epsilon)
{
    PerturbationSpec spec = perturbation_spec_from_json(read_json_file(spec_path));
    if (grid)
        spec.grid = *grid;
    if (m_cap)
        spec.m_cap = *m_cap;
    if (epsilon)
        spec.epsilon = *epsilon;
    MinimalMResult r;
    try {
        r = minimal_m(spec);
    } catch (const std::domain_error& e) {
        throw UsageError(std::string("region layout: ") + e.what());
    }
    json doc = {{"command", "cone-certify"},
                {"config", config_json(cfg)},
                {"spec",
                 {{"L", to_json(spec.l)},
                  {"k", spec.k},
                  {"scale", spec.scale},
                  {"strength", spec.strength},
                  {"s", spec.s},
                  {"m_cap", spec.m_cap},
                  {"epsilon", spec.epsilon},
                  {"grid", spec.grid}}},
                {"minimal_m", to_json(r)}};
    if (!r.found)
        doc["note"] = "no certificate found for m <= m_cap; this says nothing against the map being Anosov";
    emit(cfg, doc);

    for (const auto& run : r.runs) {
        const ConeCertificate& c = run.certificate;
        std::cerr << "m=" << c.m << " N1=" << count(c.n1) << " N2=" << count(c.n2) << " N=" << c.n
                  << " margins: unstable=" << c.margins.unstable << " no_return=" << c.margins.no_return
                  << " invariance=" << c.margins.invariance << " expansion=" << c.margins.expansion
                  << (run.valid ? "  ok" : "  fail");
        for (const auto& v : run.violations)
            std::cerr << " [" << v << "]";
        std::cerr << "\n";
    }
    if (r.found)
        std::cerr << "certified at m0 = " << r.m0 << "\n";
    else
        std::cerr << "no certificate found for m <= " << spec.m_cap << "\n";
    return r.found ? kVerified : kFailed;
}

int cmd_heisenberg_demo(const RunConfig& cfg, unsigned m_cap, const std::optional<std::string>& l1_path)
{
    const NilStructure structure = NilStructure::sqrt3();
    const NilAuto e1 = borel_smale_E1(structure);
    NilAuto l1 = borel_smale_L1();
    if (l1_path)
        l1 = nil_auto_from_derivative(structure, read_matrix(*l1_path));

    const std::vector<HeisPoint> lattice = standard_lattice();
    const SpectralClass e_spec = classify_spectrum(e1.derivative());
    const SpectralClass l_spec = classify_spectrum(l1.derivative());
    const bool e_expanding = e_spec.unstable_dim == 6;
    const bool e_hom = e1.is_homomorphism();
    const bool l_hom = l1.is_homomorphism();
    const bool l_anosov = is_anosov_matrix(l1.derivative());
    const bool e_preserves = check_lattice_preserved(e1, lattice);
    const bool l_preserves = check_lattice_preserved(l1, lattice);
    const bool commute = check_commuting_nil(l1, e1);

    json radii = json::array();
    for (unsigned m = 1; m <= m_cap; ++m) {
        const RescaledLattice r = rescale_lattice(e1, m, lattice);
        radii.push_back({{"m", m}, {"radius", to_json(r.radius)}, {"radius_approx", r.radius.get_d()}});
    }
    const bool ok = e_expanding && e_hom && l_hom && l_anosov && e_preserves && l_preserves && commute;
    emit(cfg, {{"command", "heisenberg-demo"},
               {"config", config_json(cfg)},
               {"E1", to_json(e1)},
               {"L1", to_json(l1)},
               {"E1_spectrum", to_json(e_spec)},
               {"L1_spectrum", to_json(l_spec)},
               {"checks",
                {{"E1_expanding", e_expanding},
                 {"E1_homomorphism", e_hom},
                 {"L1_homomorphism", l_hom},
                 {"L1_hyperbolic", l_anosov},
                 {"E1_preserves_lattice", e_preserves},
                 {"L1_preserves_lattice", l_preserves},
                 {"commute", commute}}},
               {"radii", radii},
               {"verified", ok}});
    std::cerr << (ok ? "all Heisenberg checks passed" : "some Heisenberg checks failed") << "\n";
    return ok ? kVerified : kFailed;
}

int cmd_exotic_query(const RunConfig& cfg, std::optional<std::uint64_t> n, std::optional<std::uint64_t> index,
                     std::optional<std::uint64_t> d, std::optional<std::uint64_t> q, std::optional<std::size_t> k,
                     std::optional<std::size_t> s)
{
    json doc = {{"command", "exotic-query"}, {"config", config_json(cfg)}};
    bool any = false;
    if (n || index) {
        if (!n || !index)
            throw UsageError("--n and --index go together");
        any = true;
        const auto fact = query_gromoll(*n, *index);
        doc["gromoll"] = {{"n", *n}, {"index", *index}, {"fact", fact ? to_json(*fact) : json(nullptr)}};
        std::cerr << "Gamma^" << *n << "_" << *index << ": "
                  << (fact ? to_string(fact->statement) : std::string("no stored fact")) << "\n";
    }
    if (d || q) {
        if (!d || !q)
            throw UsageError("--d and --q go together");
        if (*d == 0 || *q == 0)
            throw UsageError("--d and --q must be positive");
        any = true;
        const bool distinct = prop1_distinct(*d, *q);
        doc["prop1"] = {{"d", *d}, {"q", *q}, {"certified_distinct", distinct}};
        std::cerr << (distinct ? "d does not divide q: not diffeomorphic to an infranilmanifold"
                               : "d divides q: no conclusion")
                  << "\n";
    }
    if (k || s) {
        if (!k || !s)
            throw UsageError("--k and --s go together");
        if (*k < 2 || *s < 1)
            throw UsageError("need k >= 2 and s >= 1");
        any = true;
        const std::size_t sigma = dimension_congruence(*k, *s);
        doc["congruence"] = {{"k", *k}, {"s", *s}, {"sigma", sigma}};
        std::cerr << "sigma = " << sigma << "\n";
    }
    if (!any) {
        json facts = json::array();
        for (const auto& f : gromoll_facts())
            facts.push_back(to_json(f));
        doc["facts"] = facts;
        std::cerr << facts.size() << " stored facts\n";
    }
    emit(cfg, doc);
    return kVerified;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact and numerical tools for Anosov maps on tori, infratori and nilmanifolds"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--out", cfg.out, "Write the JSON document here instead of stdout");
    app.add_option("--precision", cfg.precision, "Starting precision in bits for root isolation")
        ->check(CLI::Range(16u, 1u << 14));
    app.add_option("--seed", cfg.seed, "Seed recorded in the run config");

    std::string path;
    std::string path2;

    auto* check = app.add_subcommand("check-anosov", "Classify the spectrum of an integer matrix");
    check->add_option("matrix", path, "JSON matrix file")->required();

    std::optional<std::string> scale;
    auto* expand = app.add_subcommand("find-expanding", "Build a commuting expanding map for an Anosov map");
    expand->add_option("group", path, "JSON crystallographic group")->required();
    expand->add_option("anosov", path2, "JSON affine map or matrix")->required();
    expand->add_option("--s", scale, "Expansion factor (default: q + 1)");

    std::size_t k = 0;
    std::size_t s = 0;
    bool allow_odd = false;
    auto* build = app.add_subcommand("build-infratorus", "Assemble an infratorus with a codimension-k Anosov map");
    build->add_option("seed", path, "JSON seed group")->required();
    build->add_option("--k", k, "Codimension")->required();
    build->add_option("--s", s, "Number of copies")->required();
    build->add_flag("--allow-odd", allow_odd, "Proceed with odd s");

    std::optional<unsigned> grid;
    std::optional<unsigned> m_cap;
    std::optional<double> epsilon;
    auto* cone = app.add_subcommand("cone-certify", "Search for the smallest certified cover");
    cone->add_option("spec", path, "JSON perturbation spec")->required();
    cone->add_option("--grid", grid, "Sample points per axis")->check(CLI::Range(1u, 4096u));
    cone->add_option("--m-cap", m_cap, "Largest cover exponent")->check(CLI::Range(1u, 30u));
    cone->add_option("--epsilon", epsilon, "Cone half-width")->check(CLI::PositiveNumber);

    unsigned heis_cap = 4;
    std::optional<std::string> l1_path;
    auto* heis = app.add_subcommand("heisenberg-demo", "Expanding and hyperbolic maps on H3 over Z[sqrt 3]");
    heis->add_option("--m-cap", heis_cap, "Rescaling exponents to report")->check(CLI::Range(1u, 12u));
    heis->add_option("--l1", l1_path, "JSON 6 x 6 derivative of a replacement hyperbolic map");

    std::optional<std::uint64_t> qn, qindex, qd, qq;
    std::optional<std::size_t> qk, qs;
    auto* exotic = app.add_subcommand("exotic-query", "Query the stored exotic-sphere facts");
    exotic->add_option("--n", qn, "Dimension of the Gromoll group");
    exotic->add_option("--index", qindex, "Filtration index k + 1");
    exotic->add_option("--d", qd, "Order of the homotopy sphere");
    exotic->add_option("--q", qq, "Number of sheets");
    exotic->add_option("--k", qk, "Codimension for the dimension congruence");
    exotic->add_option("--s", qs, "Copies for the dimension congruence");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kVerified : kUsage;
    }

    try {
        if (*check)
            return cmd_check_anosov(cfg, path);
        if (*expand)
            return cmd_find_expanding(cfg, path, path2, scale);
        if (*build)
            return cmd_build_infratorus(cfg, path, k, s, allow_odd);
        if (*cone)
            return cmd_cone_certify(cfg, path, grid, m_cap, epsilon);
        if (*heis)
            return cmd_heisenberg_demo(cfg, heis_cap, l1_path);
        if (*exotic)
            return cmd_exotic_query(cfg, qn, qindex, qd, qq, qk, qs);
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "failed: " << e.what() << "\n";
        return kFailed;
    }
    return kUsage;
}
