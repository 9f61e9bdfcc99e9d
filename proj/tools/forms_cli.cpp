#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "forms/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"exact discrete forms: operators, formula tables, verification"};
    app.require_subcommand(1);

    std::string complex_path;
    std::string which, formula_op, sigma, tau, flavor = "local", json_path, signature_text;
    int degree = 0, grade = 2, p_max = 4;

    CLI::App* validate = app.add_subcommand("validate", "load a complex and report its census");
    validate->add_option("--complex", complex_path, "complex JSON file")->required();

    CLI::App* op = app.add_subcommand("operator", "print one operator block exactly");
    op->add_option("name", which, "d, del, wedge, laplace or laplace-loc")->required();
    op->add_option("--complex", complex_path, "complex JSON file")->required();
    op->add_option("--degree", degree, "form degree of the source block");
    op->add_option("--grade", grade, "tensor grade (laplace-loc)");
    op->add_option("--sigma", sigma, "block envelope, e.g. 1,2 (laplace-loc)");
    op->add_option("--tau", tau, "free vertex set, e.g. 2 (laplace-loc)");

    CLI::App* formula = app.add_subcommand("formula", "emit a symbolic coefficient table");
    formula->add_option("name", formula_op, "wedge, assoc, m3 or m4")->required();
    formula->add_option("--signature", signature_text, "argument degrees, e.g. 0,1,1")->required();

    CLI::App* verify = app.add_subcommand("verify", "run the exact invariant suite");
    verify->add_option("--complex", complex_path, "complex JSON file")->required();
    verify->add_option("--p-max", p_max, "largest arity and tensor grade");
    verify->add_option("--flavor", flavor, "naive-left, naive-right or local");
    verify->add_option("--json", json_path, "write the machine-readable report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : forms::cli::kExitUsage;
    }

    forms::cli::CmdResult result;
    if (validate->parsed()) {
        result = forms::cli::cmd_validate(complex_path);
    } else if (op->parsed()) {
        result = forms::cli::cmd_operator(complex_path, which, degree, grade, sigma, tau);
    } else if (formula->parsed()) {
        std::vector<int> signature;
        std::istringstream in(signature_text);
        std::string item;
        bool ok = true;
        while (std::getline(in, item, ',')) {
            try {
                size_t used = 0;
                signature.push_back(std::stoi(item, &used));
                ok = ok && used == item.size();
            } catch (const std::exception&) {
                ok = false;
            }
        }
        if (!ok) {
            std::cerr << "usage error: bad --signature\n";
            return forms::cli::kExitUsage;
        }
        result = forms::cli::cmd_formula(formula_op, signature);
    } else {
        result = forms::cli::cmd_verify(complex_path, p_max, flavor);
        if (!json_path.empty() && !result.json.empty()) {
            std::ofstream out(json_path);
            if (!out) {
                std::cerr << "error: cannot write " << json_path << "\n";
                return forms::cli::kExitError;
            }
            out << result.json;
        }
    }
    if (result.status == forms::cli::kExitOk)
        std::cout << result.out;
    else
        std::cerr << result.out;
    return result.status;
}
