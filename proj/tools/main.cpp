#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pgl2bb/iso.hpp"
#include "pgl2bb/recognize.hpp"

using namespace pgl2bb;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

double wall_seconds(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct LoadedCert {
    Certificate cert;
    std::unique_ptr<BBGroup> G;
};

LoadedCert load_cert_with_oracle(const std::string& path) {
    Certificate cert = Certificate::from_json(slurp(path));
    if (!cert.instance)
        throw Error("certificate has no embedded instance; cannot rebuild the oracle");
    return {std::move(cert), make_instance(*cert.instance)};
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct BenchRow {
    int e;
    u128 q;
    std::uint64_t ops_recognize;
    double ops_per_map;
    std::uint64_t slp_length_max;
};

BenchRow bench_one(int e, Flavor flavor, std::uint64_t seed, int map_samples) {
    auto G = make_instance({e, flavor, seed, 0});
    Certificate cert = recognize(*G, e);
    const std::uint64_t ops_rec = cert.op_count;
    const std::uint64_t before_iso = G->op_count();
    const Iso iso(cert, *G);
    const std::uint64_t iso_setup = G->op_count() - before_iso;
    const Gf2e f = cert.explicit_field();
    std::mt19937_64 rng(mix_seed(seed, 0xb3c4));
    std::uint64_t slp_max = 0;
    const std::uint64_t before = G->op_count();
    for (int i = 0; i < map_samples; ++i) {
        const Mat2 m = random_sl2(f, rng);
        const auto [h, slp] = iso.psi_forward(m);
        slp_max = std::max(slp_max, slp.length());
        const auto [m2, slp2] = iso.psi_inverse(h);
        slp_max = std::max(slp_max, slp2.length());
        if (m2 != m) throw Error("bench round trip failure");
    }
    const double per_map = static_cast<double>(G->op_count() - before + iso_setup) /
                           (2.0 * static_cast<double>(map_samples));
    return {e, u128(1) << e, ops_rec, per_map, slp_max};
}

int cmd_selftest() {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name << "\n";
        if (!ok) ++failures;
    };

    for (int e : {2, 3}) {
        Gf2e f = Gf2e::with_default_modulus(e);
        const GroupParams gp = GroupParams::for_degree(e);
        const auto all = enumerate_sl2(f);

        bool dichotomy = true;
        for (const auto& h : all) {
            if (mat_is_identity(h) || mat_is_identity(mat_mul(f, h, h))) continue;
            for (const auto& g : all) {
                const Mat2 hg = mat_conj(f, h, g);
                const Mat2 c = mat_comm(f, h, hg);
                if (mat_is_identity(c)) continue;
                Mat2 z = c;
                if (!mat_is_identity(mat_mul(f, c, c)))
                    z = mat_mul(f, mat_pow(f, mat_mul(f, h, hg), gp.k), h);
                dichotomy = dichotomy && !mat_is_identity(z) && mat_is_identity(mat_mul(f, z, z));
            }
        }
        report("involution dichotomy exhaustive over PGL(2," + std::to_string(1 << e) + ")",
               dichotomy);

        bool sqrt_ok = true;
        for (const auto& h : all) {
            if (mat_trace(h) == 0) continue;
            const Mat2 r = mat_sqrt(f, h);
            sqrt_ok = sqrt_ok && mat_mul(f, r, r) == h;
        }
        report("matrix square roots exhaustive over SL(2," + std::to_string(1 << e) + ")", sqrt_ok);

        bool b_ok = true;
        for (const auto& g : all) {
            if (g.b == 0) continue;
            b_ok = b_ok && b_closed_form(f, g) == b_power_form(f, gp, g);
        }
        report("B-function closed form = power form over SL(2," + std::to_string(1 << e) + ")",
               b_ok);
    }

    try {
        auto G = make_instance({4, Flavor::Masked, 0, 0});
        Certificate cert = recognize(*G, 4);
        const Iso iso(cert, *G);
        const Gf2e f = cert.explicit_field();
        std::mt19937_64 rng(0);
        bool ok = true;
        for (int i = 0; i < 50; ++i) {
            const Mat2 a = random_sl2(f, rng), b = random_sl2(f, rng);
            ok = ok && bb_eq(*G, iso.psi_forward(mat_mul(f, a, b)).first,
                             G->mul(iso.psi_forward(a).first, iso.psi_forward(b).first));
        }
        report("end-to-end recognition and homomorphism spot check (masked e = 4)", ok);
    } catch (const Error& ex) {
        report(std::string("end-to-end recognition: ") + ex.what(), false);
    }

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"constructive recognition of black box groups isomorphic to PGL(2, 2^e)"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("gen", "generate a black box group instance file");
    int gen_e = 4;
    std::string gen_flavor = "masked";
    std::uint64_t gen_seed = 0;
    int gen_extra = 0;
    bool gen_reveal = false;
    std::string gen_out;
    gen->add_option("--e", gen_e, "extension degree")->required();
    gen->add_option("--flavor", gen_flavor, "transparent|masked|permutation");
    gen->add_option("--seed", gen_seed, "instance seed");
    gen->add_option("--extra-gens", gen_extra, "additional random generators");
    gen->add_flag("--reveal", gen_reveal, "include the masking secret (harness verification only)");
    gen->add_option("-o,--out", gen_out, "output file")->required();

    auto* rec = app.add_subcommand("recognize", "run the recognition pipeline on an instance");
    std::string rec_in, rec_out;
    rec->add_option("-i,--instance", rec_in, "instance JSON")->required();
    rec->add_option("-o,--out", rec_out, "certificate JSON output")->required();

    auto* map = app.add_subcommand("map", "apply the isomorphism in either direction");
    std::string map_cert, map_to_bb, map_to_matrix;
    map->add_option("--cert", map_cert, "certificate JSON")->required();
    auto* opt_tobb = map->add_option("--to-bb", map_to_bb, "matrix a:b:c:d in hex");
    auto* opt_tomat = map->add_option("--to-matrix", map_to_matrix, "black box handle in hex");
    opt_tobb->excludes(opt_tomat);

    auto* ver = app.add_subcommand("verify", "property checks for a certificate");
    std::string ver_cert;
    int ver_samples = 200;
    std::uint64_t ver_seed = 0;
    ver->add_option("--cert", ver_cert, "certificate JSON")->required();
    ver->add_option("--samples", ver_samples, "number of random samples");
    ver->add_option("--seed", ver_seed, "sampling seed");

    auto* ben = app.add_subcommand("bench", "operation-count benchmark across degrees");
    std::string ben_range = "4..16", ben_flavor = "masked", ben_out;
    std::uint64_t ben_seed = 0;
    int ben_maps = 16;
    ben->add_option("--e-range", ben_range, "degree range A..B");
    ben->add_option("--flavor", ben_flavor, "oracle flavor");
    ben->add_option("--seed", ben_seed, "instance seed");
    ben->add_option("--map-samples", ben_maps, "elements mapped per degree");
    ben->add_option("-o,--out", ben_out, "CSV output file (stdout if omitted)");

    app.add_subcommand("selftest", "exhaustive GF(4)/GF(8) oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            InstanceSpec spec{gen_e, flavor_from_name(gen_flavor), gen_seed, gen_extra};
            auto G = make_instance(spec);
            spit(gen_out, instance_to_json(spec, *G, gen_reveal));
            std::cout << "wrote " << gen_out << " (" << G->generators().size() << " generators)\n";
            return 0;
        }

        if (rec->parsed()) {
            const std::string text = slurp(rec_in);
            const InstanceSpec spec = instance_spec_from_json(text);
            auto G = load_instance(text);
            const auto t0 = std::chrono::steady_clock::now();
            Certificate cert = recognize(*G, spec.e);
            cert.instance = spec;
            spit(rec_out, cert.to_json());
            std::cout << "recognized e=" << spec.e << " in " << cert.op_count
                      << " oracle operations (" << wall_seconds(t0) << " s); wrote " << rec_out
                      << "\n";
            return 0;
        }

        if (map->parsed()) {
            auto [cert, G] = load_cert_with_oracle(map_cert);
            const Iso iso(cert, *G);
            const Gf2e f = cert.explicit_field();
            if (!map_to_bb.empty()) {
                const Mat2 m = mat_from_hex(f, map_to_bb);
                const auto [h, slp] = iso.psi_forward(m);
                std::cout << "handle " << bytes_to_hex(h) << "\n";
                std::cout << "slp length " << slp.length() << "\n" << slp.to_text();
            } else if (!map_to_matrix.empty()) {
                const auto [m, slp] = iso.psi_inverse(bytes_from_hex(map_to_matrix));
                std::cout << "matrix " << mat_to_hex(f, m) << "\n";
                std::cout << "slp length " << slp.length() << "\n" << slp.to_text();
            } else {
                std::cerr << "map: one of --to-bb or --to-matrix is required\n";
                return 2;
            }
            return 0;
        }

        if (ver->parsed()) {
            const auto t0 = std::chrono::steady_clock::now();
            auto [cert, G] = load_cert_with_oracle(ver_cert);
            const std::uint64_t ops0 = G->op_count();
            const Iso iso(cert, *G);
            const Gf2e f = cert.explicit_field();
            std::mt19937_64 rng(mix_seed(ver_seed, 0x76657279));
            bool hom = true, round = true;
            std::uint64_t slp_max = 0;
            for (int i = 0; i < ver_samples; ++i) {
                const Mat2 a = random_sl2(f, rng), b = random_sl2(f, rng);
                hom = hom && bb_eq(*G, iso.psi_forward(mat_mul(f, a, b)).first,
                                   G->mul(iso.psi_forward(a).first, iso.psi_forward(b).first));
            }
            for (int i = 0; i < ver_samples; ++i) {
                BBElem g = G->identity();
                for (int j = 0; j < 12; ++j) {
                    BBElem x = G->generators()[rng() % G->generators().size()];
                    if (rng() & 1) x = G->inv(x);
                    g = G->mul(g, x);
                }
                const auto [m, slp] = iso.psi_inverse(g);
                round = round && bb_eq(*G, iso.psi_forward(m).first, g);
                slp_max = std::max(slp_max, slp.length());
            }
            const bool slp_bound = slp_max <= 64 * static_cast<std::uint64_t>(cert.e);
            nlohmann::json rep;
            rep["e"] = cert.e;
            rep["flavor"] = cert.instance ? flavor_name(cert.instance->flavor) : "unknown";
            rep["seed"] = cert.instance ? cert.instance->seed : 0;
            rep["op_count"] = G->op_count() - ops0;
            rep["wall_time"] = wall_seconds(t0);
            rep["slp_length_max"] = slp_max;
            rep["checks_passed"] = {
                {"homomorphism", hom}, {"round_trip", round}, {"slp_bound", slp_bound}};
            std::cout << rep.dump(2) << "\n";
            return (hom && round && slp_bound) ? 0 : 1;
        }

        if (ben->parsed()) {
            const auto pos = ben_range.find("..");
            if (pos == std::string::npos) throw Error("e-range must have the form A..B");
            const int lo = std::stoi(ben_range.substr(0, pos));
            const int hi = std::stoi(ben_range.substr(pos + 2));
            if (lo < 2 || hi < lo) throw Error("invalid e-range");
            const Flavor flavor = flavor_from_name(ben_flavor);
            std::ostringstream csv;
            csv << "e,q,op_count_recognize,op_count_per_map,slp_length_max\n";
            std::vector<double> lx, ly_rec, ly_map;
            for (int e = lo; e <= hi; ++e) {
                const BenchRow row = bench_one(e, flavor, ben_seed, ben_maps);
                csv << row.e << ',' << u128_to_dec(row.q) << ',' << row.ops_recognize << ','
                    << row.ops_per_map << ',' << row.slp_length_max << "\n";
                if (e >= 4) {
                    lx.push_back(std::log(static_cast<double>(e)));
                    ly_rec.push_back(std::log(static_cast<double>(row.ops_recognize)));
                    ly_map.push_back(std::log(row.ops_per_map));
                }
            }
            if (ben_out.empty())
                std::cout << csv.str();
            else
                spit(ben_out, csv.str());
            if (lx.size() >= 2) {
                std::cerr << "fitted growth exponents (e >= 4): recognize "
                          << fit_slope(lx, ly_rec) << ", per-map " << fit_slope(lx, ly_map)
                          << "\n";
            }
            return 0;
        }

        return cmd_selftest();
    } catch (const NotRecognized& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const Error& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
