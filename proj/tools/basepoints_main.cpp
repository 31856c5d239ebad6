// Command-line front end: compute the weighted cluster of base points of an
// ideal given by polynomial generators.
#include "basept/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Base points of ideals in the local ring of a smooth surface point"};
    app.require_subcommand(1);

    auto* compute = app.add_subcommand("compute", "compute the weighted cluster of base points");
    std::string ideal_path, format = "text", out_path;
    bool intermediates = false;
    compute->add_option("--ideal", ideal_path, "file with one generator per line")->required();
    compute->add_option("--format", format, "text|json|dot")->check(CLI::IsMember({"text", "json", "dot"}));
    compute->add_flag("--intermediates", intermediates, "include the intermediate clusters (json)");
    compute->add_option("--out", out_path, "output file (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    std::ifstream in(ideal_path);
    if (!in) {
        std::cerr << "error: cannot open " << ideal_path << "\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    try {
        basept::IdealInput ideal = basept::parse_ideal(buf.str());
        basept::RunConfig cfg;
        cfg.intermediates = intermediates;
        if (format == "json") cfg.format = basept::OutputFormat::Json;
        else if (format == "dot") cfg.format = basept::OutputFormat::Dot;
        basept::BasePointsResult result = basept::base_points(ideal);
        std::string text = basept::render(result, ideal, cfg);
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path);
            if (!out) {
                std::cerr << "error: cannot write " << out_path << "\n";
                return 1;
            }
            out << text;
        }
        return 0;
    } catch (const basept::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const basept::EmptyIdeal& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
