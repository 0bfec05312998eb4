#include <charconv>
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "km/fsutil.hpp"
#include "km/synth.hpp"

// Seeded synthetic CSV generator for experiments and examples.
int main(int argc, char** argv) {
    CLI::App app{"generate seeded synthetic numeric datasets as CSV"};
    std::size_t n = 10000, dim = 4, blobs = 8;
    double spread = 0.5, box = 10.0;
    std::uint64_t seed = 1;
    std::string out;
    app.add_option("--n", n, "rows")->capture_default_str();
    app.add_option("--dim", dim, "attributes")->capture_default_str();
    app.add_option("--blobs", blobs, "blob count; 0 for uniform points")->capture_default_str();
    app.add_option("--spread", spread, "within-blob stddev")->capture_default_str();
    app.add_option("--box", box, "coordinate range [-box, box]")->capture_default_str();
    app.add_option("--seed", seed, "generator seed")->capture_default_str();
    double skew = 1.0;
    app.add_option("--skew", skew, "geometric blob-size skew (1 = equal)")->capture_default_str();
    std::size_t supers = 0, children = 0;
    double child_offset = 2.5, leaf_spread = 0.4;
    app.add_option("--supers", supers, "two-level mode: super-cluster count");
    app.add_option("--children", children, "two-level mode: clumps per super");
    app.add_option("--child-offset", child_offset, "two-level mode: clump offset stddev")->capture_default_str();
    app.add_option("--leaf-spread", leaf_spread, "two-level mode: within-clump stddev")->capture_default_str();
    std::size_t levels = 0;
    double base_gap = 40.0, decay = 0.4;
    app.add_option("--levels", levels, "nested mode: binary split levels");
    app.add_option("--base-gap", base_gap, "nested mode: top-level gap")->capture_default_str();
    app.add_option("--decay", decay, "nested mode: per-level gap decay")->capture_default_str();
    app.add_option("--out", out, "output CSV path")->required();
    CLI11_PARSE(app, argc, argv);

    try {
        const km::Dataset data =
            levels > 0 ? km::synth::make_nested(n, dim, levels, base_gap, decay, spread, seed)
            : supers > 0 ? km::synth::make_hier_blobs(n, dim, supers, children, box, child_offset,
                                                    leaf_spread, seed, skew)
            : blobs == 0 ? km::synth::make_uniform(n, dim, box, seed)
                         : km::synth::make_blobs(n, dim, blobs, spread, box, seed, skew);
        km::AtomicFile file(out);
        std::string buf;
        char tmp[32];
        for (std::size_t i = 0; i < data.size(); ++i) {
            buf.clear();
            const auto p = data.point(i);
            for (std::size_t t = 0; t < dim; ++t) {
                if (t > 0) buf.push_back(',');
                const auto [ptr, ec] = std::to_chars(tmp, tmp + sizeof(tmp), p[t]);
                buf.append(tmp, ptr);
            }
            buf.push_back('\n');
            file.stream() << buf;
        }
        file.commit();
        std::printf("wrote %zu rows (%zu attributes) to %s\n", data.size(), dim, out.c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
