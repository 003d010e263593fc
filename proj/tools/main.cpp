#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "metaharvest/cli/app.hpp"

int main(int argc, char** argv)
{
    auto logger = spdlog::stderr_color_mt("metaharvest");
    spdlog::set_default_logger(logger);
    spdlog::set_pattern("%^%l%$: %v");

    std::vector<std::string> args(argv + 1, argv + argc);
    return metaharvest::cli::run_cli(args, std::cout, std::cerr);
}
