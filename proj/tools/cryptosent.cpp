// Command-line front end for the sentiment-to-trend pipeline.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cryptosent/error.hpp"
#include "cryptosent/pipeline.hpp"

namespace {

struct CommandHelp {
    const char* name;
    const char* description;
};

constexpr CommandHelp kHelp[] = {
    {"synth", "generate a synthetic corpus, seed list and price series"},
    {"build-lexicon", "bootstrap the sentiment lexicon from seeds and ranked training posts"},
    {"encode", "print the encoded index sequence of every corpus post"},
    {"train", "train the LSTM sentiment classifier on the training days"},
    {"predict-sentiment", "classify every corpus post (or --text)"},
    {"predict-trend", "majority-vote next-day trends over the test days"},
    {"baseline-ar", "fit the autoregressive baseline and forecast the test days"},
    {"evaluate", "compare both methods with Up-class precision and recall"},
    {"gradcheck", "check backpropagation against finite differences on a tiny model"},
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cryptosent: crypto sentiment lexicon, LSTM classifier and trend evaluation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    app.add_option("-c,--config", config_path, "config file of 'key = value' lines");
    std::map<std::string, std::string> overrides;
    for (const std::string& key : cryptosent::PipelineConfig::keys())
        app.add_option("--" + key, overrides[key], "override config key '" + key + "'");

    std::vector<CLI::App*> commands;
    for (const CommandHelp& c : kHelp) commands.push_back(app.add_subcommand(c.name, c.description));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << app.help();
        std::cerr << "error: code=2 kind=usage message=" << e.what() << '\n';
        return 2;
    }

    cryptosent::PipelineConfig cfg;
    try {
        if (!config_path.empty()) cfg = cryptosent::load_config(config_path);
        for (const std::string& key : cryptosent::PipelineConfig::keys())
            if (app.count("--" + key) > 0) cfg.set(key, overrides[key]);
    } catch (const cryptosent::Error& e) {
        std::cerr << "error: code=" << e.exit_code() << " kind=usage message=" << e.what() << '\n';
        return e.exit_code();
    }

    for (CLI::App* sub : commands)
        if (sub->parsed()) return cryptosent::run(sub->get_name(), cfg, std::cout, std::cerr);
    return 2;
}
