#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fschubert/errors.hpp"
#include "fschubert/io.hpp"

using namespace fschubert;

int main(int argc, char** argv) {
    CLI::App app{"Equivariant oriented cohomology of flag varieties via formal group laws"};
    app.require_subcommand(1);
    auto* run = app.add_subcommand("run", "Run a JSON job file");
    std::string job_path, out_path;
    std::optional<int> trunc;
    RunOptions opts;
    run->add_option("job", job_path, "Job file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_path, "Write the result here instead of stdout");
    run->add_option("--trunc", trunc, "Truncation degree N (overrides the job)")->check(CLI::Range(2, 60));
    run->add_option("--threads", opts.threads, "Worker threads for pairing matrices")->check(CLI::Range(1u, 256u));
    run->add_flag("--verify-representatives", opts.verify_representatives,
                  "Cross-check parabolic operators with random coset representatives");
    run->add_flag("--timing", opts.timing, "Add wall-clock timing to the output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    opts.trunc = trunc;
    opts.base_dir = std::filesystem::path(job_path).parent_path();

    try {
        std::ifstream in(job_path);
        Json job;
        try {
            job = Json::parse(in);
        } catch (const Json::parse_error& e) {
            throw ValidationError(std::string("malformed job file: ") + e.what());
        }
        Json out = run_job(job, opts);
        std::string text = dump_canonical(out);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream f(out_path);
            if (!f) throw ValidationError("cannot write " + out_path);
            f << text;
        }
        const Json& r = out["result"];
        if (r.is_object() && r.contains("failed") && r["failed"].get<int>() > 0) return 1;
        return 0;
    } catch (const std::exception& e) {
        int rc = exit_code_for(e);
        const char* kind = rc == 2                                       ? "validation error"
                           : dynamic_cast<const PrecisionError*>(&e) != nullptr ? "precision error"
                           : rc == 3                                     ? "arithmetic error"
                           : rc == 4                                     ? "resource error"
                                                                         : "error";
        std::cerr << kind << ": " << e.what() << "\n";
        return rc;
    }
}
