// End-to-end checks of the command line tool.  Invoked by ctest with the
// binary path as the only argument; exercises the documented exit codes.
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

int failures = 0;

void expect(bool ok, const std::string& what) {
    if (!ok) {
        ++failures;
        std::cerr << "FAILED: " << what << "\n";
    }
}

int run(const std::string& cmd) {
    const int rc = std::system((cmd + " >cli_stdout.txt 2>cli_stderr.txt").c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: test_cli <path-to-cli>\n";
        return 1;
    }
    const std::string cli = argv[1];

    // gen -> recognize -> map -> verify, all exit 0
    expect(run(cli + " gen --e 4 --flavor masked --seed 1 -o cli_g.json") == 0, "gen exits 0");
    expect(run(cli + " recognize -i cli_g.json -o cli_c.json") == 0, "recognize exits 0");

    auto cert = nlohmann::json::parse(slurp("cli_c.json"));
    expect(cert.at("e") == 4, "certificate has e = 4");
    expect(cert.at("minpoly").get<std::string>().size() == 2, "minpoly is one byte of hex");

    // X(1) over GF(16) maps to the certificate's u
    expect(run(cli + " map --cert cli_c.json --to-bb 01:00:01:01") == 0, "map --to-bb exits 0");
    const std::string out = slurp("cli_stdout.txt");
    expect(out.find("handle " + cert.at("u").get<std::string>()) != std::string::npos,
           "X(1) maps to u");

    expect(run(cli + " map --cert cli_c.json --to-matrix " + cert.at("u").get<std::string>()) == 0,
           "map --to-matrix exits 0");
    expect(slurp("cli_stdout.txt").find("matrix 01:00:01:01") != std::string::npos,
           "u maps back to X(1)");

    expect(run(cli + " verify --cert cli_c.json --samples 50") == 0, "verify exits 0");

    // determinism: a second recognition run writes identical bytes
    expect(run(cli + " recognize -i cli_g.json -o cli_c2.json") == 0, "second recognize exits 0");
    expect(slurp("cli_c.json") == slurp("cli_c2.json"), "certificates are byte-identical");

    // malformed inputs exit 2
    spit("cli_bad.json", "{not json");
    expect(run(cli + " recognize -i cli_bad.json -o cli_x.json") == 2, "malformed instance exits 2");
    expect(run(cli + " recognize -i cli_missing.json -o cli_x.json") == 2, "missing file exits 2");
    expect(run(cli + " gen --e 1 --flavor masked -o cli_x.json") == 2, "unsupported degree exits 2");
    expect(run(cli + " map --cert cli_c.json --to-bb zz:00:01:01") == 2, "bad matrix hex exits 2");
    expect(run(cli + " frobnicate") == 2, "unknown subcommand exits 2");

    // a tampered instance file is rejected
    {
        auto inst = nlohmann::json::parse(slurp("cli_g.json"));
        std::string h = inst.at("generators")[0].get<std::string>();
        h[0] = h[0] == '0' ? '1' : '0';
        inst["generators"][0] = h;
        spit("cli_tampered.json", inst.dump(2));
        expect(run(cli + " recognize -i cli_tampered.json -o cli_x.json") == 2,
               "tampered generators exit 2");
    }

    // a certificate inconsistent with its oracle exits 1 (recognition-level failure)
    {
        auto bad = cert;
        std::swap(bad["u"], bad["h_s"]);  // u must be an involution; h(s) is not
        spit("cli_badcert.json", bad.dump(2));
        expect(run(cli + " verify --cert cli_badcert.json --samples 10") == 1,
               "inconsistent certificate exits 1");
    }

    // bench output is deterministic apart from the stderr timing note
    expect(run(cli + " bench --e-range 4..5 --map-samples 4 -o cli_b1.csv") == 0, "bench exits 0");
    expect(run(cli + " bench --e-range 4..5 --map-samples 4 -o cli_b2.csv") == 0,
           "bench repeat exits 0");
    expect(slurp("cli_b1.csv") == slurp("cli_b2.csv"), "bench CSV is deterministic");
    expect(slurp("cli_b1.csv").rfind("e,q,op_count_recognize,op_count_per_map,slp_length_max", 0) ==
               0,
           "bench CSV header");

    // permutation flavor end to end
    expect(run(cli + " gen --e 3 --flavor permutation --seed 2 -o cli_p.json") == 0,
           "gen permutation exits 0");
    expect(run(cli + " recognize -i cli_p.json -o cli_pc.json") == 0,
           "recognize permutation exits 0");
    expect(run(cli + " verify --cert cli_pc.json --samples 25") == 0, "verify permutation exits 0");

    expect(run(cli + " selftest") == 0, "selftest exits 0");

    if (failures == 0) std::cout << "cli tests passed\n";
    return failures == 0 ? 0 : 1;
}
