#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rlam/analysis/stats.hpp"
#include "rlam/analysis/tds.hpp"
#include "rlam/freq/frequency_model.hpp"
#include "rlam/io/checkpoint.hpp"
#include "rlam/io/manifest.hpp"
#include "rlam/io/run_config.hpp"
#include "rlam/io/text_format.hpp"
#include "rlam/metrics/readability.hpp"
#include "rlam/metrics/sari.hpp"
#include "rlam/reward/reward.hpp"
#include "rlam/rl/rollout.hpp"
#include "rlam/rl/train.hpp"
#include "rlam/text/tokenizer.hpp"
#include "rlam/toy/corpus.hpp"
#include "rlam/toy/vocabulary.hpp"

#ifndef RLAM_BUILD_ID
#define RLAM_BUILD_ID "dev"
#endif

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace rlam;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kMissingInput = 2;

int missing_input(const std::string& what, const std::string& path) {
    std::cerr << "error: cannot read " << what << ": " << path << "\n";
    return kMissingInput;
}

int fail(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return kError;
}

bool readable(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return in.good();
}

std::string fmt(double v) { return io::format_double(v); }

std::string fmt_opt(const std::optional<double>& v) {
    return v ? fmt(*v) : std::string();
}

void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) {
        return std::isspace(c);
    });
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file: " + path);
    return out;
}

// ---- metric tables ------------------------------------------------------

constexpr std::array<const char*, 7> kMetricColumns = {
    "ari",          "fk_grade",          "voa_log_ratio", "sentence_length",
    "word_accessibility", "word_length", "sentence_wa_std"};

using MetricRow = std::array<std::optional<double>, 7>;

struct MetricTable {
    std::vector<std::string> ids;
    std::vector<MetricRow> rows;
};

MetricRow report_row(const metrics::MetricReport& report) {
    MetricRow row;
    row[0] = report.ari;
    row[1] = report.fk_grade;
    row[2] = report.voa;
    row[3] = report.mean_sentence_length;
    row[4] = report.mean_word_accessibility;
    row[5] = report.mean_word_length;
    row[6] = report.sentence_accessibility_std;
    return row;
}

std::optional<double> column_mean(const MetricTable& table, std::size_t col) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& row : table.rows)
        if (row[col]) {
            sum += *row[col];
            ++n;
        }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

std::optional<double> column_sample_std(const MetricTable& table, std::size_t col) {
    const auto mean = column_mean(table, col);
    if (!mean) return std::nullopt;
    double ss = 0.0;
    std::size_t n = 0;
    for (const auto& row : table.rows)
        if (row[col]) {
            const double d = *row[col] - *mean;
            ss += d * d;
            ++n;
        }
    if (n < 2) return std::nullopt;
    return std::sqrt(ss / static_cast<double>(n - 1));
}

void write_metric_csv(const MetricTable& table, const std::string& path) {
    auto out = open_out(path);
    out << "# rlam-metrics v1\n";
    out << "doc";
    for (const char* col : kMetricColumns) out << ',' << col;
    out << '\n';
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out << table.ids[i];
        for (std::size_t c = 0; c < kMetricColumns.size(); ++c)
            out << ',' << fmt_opt(table.rows[i][c]);
        out << '\n';
    }
    out << "mean";
    for (std::size_t c = 0; c < kMetricColumns.size(); ++c)
        out << ',' << fmt_opt(column_mean(table, c));
    out << '\n';
    out << "std";
    for (std::size_t c = 0; c < kMetricColumns.size(); ++c)
        out << ',' << fmt_opt(column_sample_std(table, c));
    out << '\n';
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? 0.0 : sum / static_cast<double>(xs.size());
}

// ---- build-freq ---------------------------------------------------------

int run_build_freq(const std::string& corpus_path, const std::string& out_path,
                   std::uint64_t capacity, double l2, int feature_dim) {
    std::ifstream in(corpus_path, std::ios::binary);
    if (!in) return missing_input("corpus", corpus_path);

    std::unordered_map<std::string, std::uint64_t> type_counts;
    std::uint64_t total = 0;
    std::string line;
    while (std::getline(in, line)) {
        strip_cr(line);
        total += freq::count_word_tokens(line, type_counts);
    }
    if (total == 0) return fail("empty reference corpus: " + corpus_path);

    freq::FrequencyModelConfig config;
    config.capacity = capacity;
    config.l2 = l2;
    config.feature_dim = feature_dim;
    try {
        const auto model = freq::fit_frequency_model(type_counts, total, config);
        if (const auto parent = fs::path(out_path).parent_path(); !parent.empty())
            fs::create_directories(parent);
        freq::save_frequency_model(model, out_path);
        std::cout << "types_seen=" << type_counts.size()
                  << " table_size=" << model.table.size()
                  << " total_tokens=" << model.total_tokens
                  << " out=" << out_path << "\n";
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return kOk;
}

// ---- score --------------------------------------------------------------

int run_score(const std::string& docs_path, const std::string& model_path,
              const std::string& voa_path, const std::string& out_path) {
    std::ifstream docs(docs_path, std::ios::binary);
    if (!docs) return missing_input("documents file", docs_path);
    const bool use_model = !model_path.empty();
    if (use_model && !readable(model_path))
        return missing_input("frequency model", model_path);

    try {
        freq::FrequencyModel model;
        if (use_model) model = freq::load_frequency_model(model_path);
        metrics::VoaLexicon lexicon;
        const bool use_voa = !voa_path.empty();
        if (use_voa) {
            if (!readable(voa_path)) return missing_input("word list", voa_path);
            lexicon = metrics::VoaLexicon::from_file(voa_path);
        }

        MetricTable table;
        std::string line;
        std::size_t line_no = 0, skipped = 0;
        while (std::getline(docs, line)) {
            ++line_no;
            strip_cr(line);
            if (blank(line)) {
                std::cerr << "warning: line " << line_no
                          << ": empty document, skipped\n";
                ++skipped;
                continue;
            }
            try {
                const auto doc = text::tokenize(line);
                const auto report = metrics::compute_report(
                    doc, use_model ? &model : nullptr, use_voa ? &lexicon : nullptr);
                table.ids.push_back(std::to_string(line_no));
                table.rows.push_back(report_row(report));
            } catch (const std::exception& e) {
                std::cerr << "warning: line " << line_no << ": " << e.what()
                          << ", skipped\n";
                ++skipped;
            }
        }
        if (const auto parent = fs::path(out_path).parent_path(); !parent.empty())
            fs::create_directories(parent);
        write_metric_csv(table, out_path);
        std::cout << "documents=" << table.rows.size() << " skipped=" << skipped
                  << " out=" << out_path << "\n";
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return kOk;
}

// ---- shared config handling ----------------------------------------------

int apply_overrides(io::RunConfig& config, const std::vector<std::string>& sets) {
    for (const std::string& assignment : sets) {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos)
            return fail("--set expects key=value, got '" + assignment + "'");
        try {
            io::apply_config_field(config, assignment.substr(0, eq),
                                   assignment.substr(eq + 1));
        } catch (const std::exception& e) {
            return fail(e.what());
        }
    }
    return kOk;
}

struct ToyWorld {
    toy::ToyVocabulary vocab;
    toy::ToyCorpus train_corpus;
    toy::ToyCorpus eval_corpus;
    toy::BigramPolicy sft;
    freq::FrequencyModel freq;
};

ToyWorld build_toy_world(const io::RunConfig& config) {
    ToyWorld world{toy::ToyVocabulary::create(config.vocab_size,
                                              config.synonym_pairs),
                   {},
                   {},
                   toy::BigramPolicy(0),
                   {}};
    world.train_corpus =
        toy::generate_corpus(world.vocab, config.train_docs, config.corpus_seed);
    world.eval_corpus =
        toy::generate_corpus(world.vocab, config.eval_docs, config.eval_corpus_seed);
    world.sft = toy::fit_sft(world.vocab, world.train_corpus, config.sft_alpha);
    world.freq = toy::build_toy_frequency_model(world.vocab);
    return world;
}

void write_prompts_tsv(const toy::ToyCorpus& corpus, const std::string& path) {
    auto out = open_out(path);
    out << "# rlam-prompts v1\n";
    for (const auto& doc : corpus.docs)
        out << doc.source_text << '\t' << doc.target_text << '\n';
}

// ---- train ----------------------------------------------------------------

int run_train(const std::string& config_path, const std::string& out_dir,
              const std::vector<std::string>& sets) {
    io::RunConfig config;
    if (!config_path.empty()) {
        if (!readable(config_path)) return missing_input("config file", config_path);
        try {
            config = io::load_run_config(config_path);
        } catch (const std::exception& e) {
            return fail(e.what());
        }
    }
    if (const int rc = apply_overrides(config, sets); rc != kOk) return rc;
    try {
        io::validate_run_config(config);
    } catch (const std::exception& e) {
        return fail(e.what());
    }

    io::RunManifest manifest;
    manifest.subcommand = "train";
    manifest.build_id = RLAM_BUILD_ID;
    manifest.seed = config.seed;
    manifest.config_snapshot = io::serialize_run_config(config);
    manifest.started_at = io::utc_timestamp();
    if (!config_path.empty()) manifest.inputs.emplace_back("config", config_path);

    try {
        fs::create_directories(out_dir);
        const auto path_in = [&](const char* name) {
            return (fs::path(out_dir) / name).string();
        };

        ToyWorld world = build_toy_world(config);
        {
            auto cfg_out = open_out(path_in("config.cfg"));
            cfg_out << manifest.config_snapshot;
        }
        freq::save_frequency_model(world.freq, path_in("freq_model.bin"));
        io::Checkpoint sft_ckpt{world.sft, toy::TabularValue(config.vocab_size),
                                config.vocab_size, config.synonym_pairs};
        io::save_checkpoint(sft_ckpt, path_in("sft.bin"));
        write_prompts_tsv(world.eval_corpus, path_in("eval_prompts.tsv"));

        std::vector<std::vector<int>> prompts;
        prompts.reserve(world.train_corpus.docs.size());
        for (const auto& doc : world.train_corpus.docs)
            prompts.push_back(doc.prompt(world.vocab));

        const auto reward_config = io::to_reward_config(config);
        const auto scorer = [&](const std::vector<int>& tokens,
                                bool finished) -> rl::ScoredGeneration {
            const std::string text = world.vocab.decode(tokens);
            const auto breakdown =
                reward::terminal_reward(text, finished, world.freq, reward_config);
            rl::ScoredGeneration scored;
            scored.reward = breakdown.total;
            if (!breakdown.degenerate)
                scored.sentence_spread = breakdown.sentence_accessibility_std;
            return scored;
        };

        auto log_out = open_out(path_in("train_log.jsonl"));
        log_out << ordered_json{{"format", "rlam-train-log v1"}}.dump() << '\n';

        rl::TrainOptions options;
        options.steps = config.steps;
        options.instability_threshold = config.instability_threshold;
        options.checkpoint_every = config.checkpoint_every;
        options.on_step = [&](const rl::TrainStepStats& s) {
            ordered_json record{{"step", s.step},
                                {"reward_mean", s.reward_mean},
                                {"reward_std", s.reward_std},
                                {"kl", s.kl},
                                {"beta_kl", s.beta_kl},
                                {"clip_fraction", s.clip_fraction},
                                {"policy_loss", s.policy_loss},
                                {"value_loss", s.value_loss},
                                {"sentence_wa_std", s.sentence_spread},
                                {"finished_fraction", s.finished_fraction},
                                {"unstable", s.unstable}};
            log_out << record.dump() << '\n';
            if (s.step % 50 == 0)
                std::cout << "step=" << s.step << " reward=" << fmt(s.reward_mean)
                          << " kl=" << fmt(s.kl) << "\n";
        };
        if (config.checkpoint_every > 0)
            options.on_checkpoint = [&](int step, const toy::BigramPolicy& p,
                                        const toy::TabularValue& v) {
                char name[32];
                std::snprintf(name, sizeof(name), "ckpt_step%06d.bin", step);
                io::save_checkpoint({p, v, config.vocab_size, config.synonym_pairs},
                                    path_in(name));
            };

        toy::BigramPolicy policy = world.sft;
        toy::TabularValue value(config.vocab_size);
        auto controller = io::to_kl_controller(config);
        const auto ppo = io::to_ppo_config(config);

        const auto result =
            rl::train(policy, world.sft, value, prompts, toy::ToyVocabulary::kEos,
                      scorer, ppo, controller, options);

        io::save_checkpoint({policy, value, config.vocab_size, config.synonym_pairs},
                            path_in("ckpt_final.bin"));

        manifest.outputs = {{"config", path_in("config.cfg")},
                            {"frequency_model", path_in("freq_model.bin")},
                            {"sft_checkpoint", path_in("sft.bin")},
                            {"eval_prompts", path_in("eval_prompts.tsv")},
                            {"train_log", path_in("train_log.jsonl")},
                            {"final_checkpoint", path_in("ckpt_final.bin")}};
        manifest.finished_at = io::utc_timestamp();
        io::write_manifest(manifest, path_in("manifest.json"));

        std::cout << "steps=" << result.steps_completed << " out=" << out_dir
                  << "\n";
        if (result.halted)
            return fail("training halted: " + result.halt_reason);
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return kOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalSide {
    MetricTable metrics;
    std::vector<double> rewards;
    std::vector<reward::RewardBreakdown> breakdowns;
    std::vector<double> sari_scores;
    std::vector<std::string> texts;
    std::vector<double> wa_values;
    std::vector<double> sl_values;
    std::vector<double> ari_values;
    int finished = 0;
};

void eval_generation(EvalSide& side, const std::string& doc_id,
                     const std::vector<int>& generated,
                     const toy::ToyVocabulary& vocab,
                     const freq::FrequencyModel& model,
                     const reward::RewardConfig& reward_config,
                     const std::string& source_text,
                     const std::string& target_text) {
    std::vector<int> tokens = generated;
    const bool finished =
        !tokens.empty() && tokens.back() == toy::ToyVocabulary::kEos;
    if (finished) tokens.pop_back();
    const std::string text = vocab.decode(tokens);

    side.texts.push_back(text);
    if (finished) ++side.finished;

    side.metrics.ids.push_back(doc_id);
    MetricRow row{};
    try {
        const auto report =
            metrics::compute_report(text::tokenize(text), &model, nullptr);
        row = report_row(report);
        if (row[4]) side.wa_values.push_back(*row[4]);
        side.sl_values.push_back(report.mean_sentence_length);
        side.ari_values.push_back(report.ari);
    } catch (const std::exception&) {
        // unmeasurable generation: row stays empty
    }
    side.metrics.rows.push_back(row);

    const auto breakdown =
        reward::terminal_reward(text, finished, model, reward_config);
    side.breakdowns.push_back(breakdown);
    side.rewards.push_back(breakdown.total);

    side.sari_scores.push_back(metrics::sari(source_text, text, {target_text}));
}

int run_eval(const std::string& ckpt_path, const std::string& sft_path,
             const std::string& prompts_path, const std::string& model_path,
             const std::string& out_dir, const std::string& config_path,
             const std::vector<std::string>& sets) {
    if (!readable(ckpt_path)) return missing_input("checkpoint", ckpt_path);
    if (!readable(sft_path)) return missing_input("reference checkpoint", sft_path);
    if (!readable(prompts_path)) return missing_input("prompts file", prompts_path);
    if (!readable(model_path)) return missing_input("frequency model", model_path);

    io::RunConfig config;
    if (!config_path.empty()) {
        if (!readable(config_path)) return missing_input("config file", config_path);
        try {
            config = io::load_run_config(config_path);
        } catch (const std::exception& e) {
            return fail(e.what());
        }
    }
    if (const int rc = apply_overrides(config, sets); rc != kOk) return rc;

    try {
        const auto rl_ckpt = io::load_checkpoint(ckpt_path);
        const auto sft_ckpt = io::load_checkpoint(sft_path);
        if (rl_ckpt.vocab_size != sft_ckpt.vocab_size ||
            rl_ckpt.synonym_pairs != sft_ckpt.synonym_pairs)
            return fail("vocabulary mismatch between checkpoints: " +
                        std::to_string(rl_ckpt.vocab_size) + "/" +
                        std::to_string(rl_ckpt.synonym_pairs) + " vs " +
                        std::to_string(sft_ckpt.vocab_size) + "/" +
                        std::to_string(sft_ckpt.synonym_pairs));

        const auto vocab = toy::ToyVocabulary::create(rl_ckpt.vocab_size,
                                                      rl_ckpt.synonym_pairs);
        const auto model = freq::load_frequency_model(model_path);
        const auto reward_config = io::to_reward_config(config);
        const int eos = toy::ToyVocabulary::kEos;

        std::ifstream prompts_in(prompts_path, std::ios::binary);
        std::vector<std::vector<int>> prompt_ids;
        std::vector<std::string> sources, targets;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(prompts_in, line)) {
            ++line_no;
            strip_cr(line);
            if (line.empty() || line[0] == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos) {
                std::cerr << "warning: prompts line " << line_no
                          << ": expected source<TAB>target, skipped\n";
                continue;
            }
            const std::string source = line.substr(0, tab);
            const std::string target = line.substr(tab + 1);
            try {
                auto ids = toy::encode_text(vocab, source);
                ids.push_back(toy::ToyVocabulary::kSeparator);
                prompt_ids.push_back(std::move(ids));
                sources.push_back(source);
                targets.push_back(target);
            } catch (const std::exception& e) {
                std::cerr << "warning: prompts line " << line_no << ": " << e.what()
                          << ", skipped\n";
            }
        }
        if (prompt_ids.empty()) return fail("no usable prompts in " + prompts_path);

        fs::create_directories(out_dir);
        const auto path_in = [&](const char* name) {
            return (fs::path(out_dir) / name).string();
        };

        EvalSide rl_side, sft_side;
        for (std::size_t i = 0; i < prompt_ids.size(); ++i) {
            const std::string doc_id = std::to_string(i + 1);
            const auto gen_rl = rl::greedy_decode(rl_ckpt.policy, prompt_ids[i], eos,
                                                  config.max_new_tokens);
            const auto gen_sft = rl::greedy_decode(sft_ckpt.policy, prompt_ids[i],
                                                   eos, config.max_new_tokens);
            eval_generation(rl_side, doc_id, gen_rl, vocab, model, reward_config,
                            sources[i], targets[i]);
            eval_generation(sft_side, doc_id, gen_sft, vocab, model, reward_config,
                            sources[i], targets[i]);
        }

        const auto tds = analysis::tds_analyze(rl_ckpt.policy, sft_ckpt.policy,
                                               prompt_ids, eos,
                                               config.max_new_tokens);

        write_metric_csv(rl_side.metrics, path_in("metrics_rl.csv"));
        write_metric_csv(sft_side.metrics, path_in("metrics_sft.csv"));

        {
            auto out = open_out(path_in("rewards.csv"));
            out << "# rlam-rewards v1\n";
            out << "doc,reward_rl,wa_component_rl,sl_component_rl,degenerate_rl,"
                   "reward_sft,wa_component_sft,sl_component_sft,degenerate_sft\n";
            for (std::size_t i = 0; i < prompt_ids.size(); ++i) {
                const auto& a = rl_side.breakdowns[i];
                const auto& b = sft_side.breakdowns[i];
                out << (i + 1) << ',' << fmt(a.total) << ',' << fmt(a.wa_component)
                    << ',' << fmt(a.sl_component) << ',' << (a.degenerate ? 1 : 0)
                    << ',' << fmt(b.total) << ',' << fmt(b.wa_component) << ','
                    << fmt(b.sl_component) << ',' << (b.degenerate ? 1 : 0) << '\n';
            }
            out << "mean," << fmt(mean_of(rl_side.rewards)) << ",,,,"
                << fmt(mean_of(sft_side.rewards)) << ",,,\n";
        }

        {
            auto out = open_out(path_in("sari.csv"));
            out << "# rlam-sari v1\n";
            out << "doc,sari_rl,sari_sft\n";
            for (std::size_t i = 0; i < prompt_ids.size(); ++i)
                out << (i + 1) << ',' << fmt(rl_side.sari_scores[i]) << ','
                    << fmt(sft_side.sari_scores[i]) << '\n';
            out << "mean," << fmt(mean_of(rl_side.sari_scores)) << ','
                << fmt(mean_of(sft_side.sari_scores)) << '\n';
        }

        {
            auto out = open_out(path_in("generations_rl.txt"));
            out << "# rlam-generations v1\n";
            for (const auto& t : rl_side.texts) out << t << '\n';
        }
        {
            auto out = open_out(path_in("generations_sft.txt"));
            out << "# rlam-generations v1\n";
            for (const auto& t : sft_side.texts) out << t << '\n';
        }

        {
            ordered_json doc;
            doc["format"] = "rlam-tds v1";
            doc["unshifted_count"] = tds.unshifted_count;
            doc["marginal_count"] = tds.marginal_count;
            doc["shifted_count"] = tds.shifted_count;
            doc["total"] = tds.total();
            doc["unshifted_prop"] = tds.unshifted_prop;
            doc["marginal_prop"] = tds.marginal_prop;
            doc["shifted_prop"] = tds.shifted_prop;
            doc["tokens_by_decile"] = tds.tokens_by_decile;
            doc["marginal_rate_by_decile"] = tds.marginal_rate_by_decile;
            doc["shifted_rate_by_decile"] = tds.shifted_rate_by_decile;
            auto out = open_out(path_in("tds.json"));
            out << doc.dump(2) << '\n';
        }

        {
            auto out = open_out(path_in("tds_positions.csv"));
            out << "# rlam-tds-positions v1\n";
            out << "position,proportion,category\n";
            for (int d = 0; d < 10; ++d) {
                const double m = tds.marginal_rate_by_decile[d];
                const double s = tds.shifted_rate_by_decile[d];
                const double u = tds.tokens_by_decile[d] > 0 ? 1.0 - m - s : 0.0;
                out << d << ',' << fmt(u) << ",unshifted\n";
                out << d << ',' << fmt(m) << ",marginal\n";
                out << d << ',' << fmt(s) << ",shifted\n";
            }
        }

        const double wa_rl = mean_of(rl_side.wa_values);
        const double wa_sft = mean_of(sft_side.wa_values);
        const double sl_rl = mean_of(rl_side.sl_values);
        const double sl_sft = mean_of(sft_side.sl_values);
        {
            ordered_json doc;
            doc["format"] = "rlam-eval-summary v1";
            doc["prompts"] = prompt_ids.size();
            doc["reward_mean_rl"] = mean_of(rl_side.rewards);
            doc["reward_mean_sft"] = mean_of(sft_side.rewards);
            doc["wa_mean_rl"] = wa_rl;
            doc["wa_mean_sft"] = wa_sft;
            doc["wa_gain"] = wa_rl - wa_sft;
            doc["wa_measured_rl"] = rl_side.wa_values.size();
            doc["wa_measured_sft"] = sft_side.wa_values.size();
            doc["sl_mean_rl"] = sl_rl;
            doc["sl_mean_sft"] = sl_sft;
            doc["sl_reduction"] = sl_sft - sl_rl;
            doc["ari_mean_rl"] = mean_of(rl_side.ari_values);
            doc["ari_mean_sft"] = mean_of(sft_side.ari_values);
            doc["sari_mean_rl"] = mean_of(rl_side.sari_scores);
            doc["sari_mean_sft"] = mean_of(sft_side.sari_scores);
            doc["finished_fraction_rl"] =
                static_cast<double>(rl_side.finished) /
                static_cast<double>(prompt_ids.size());
            doc["finished_fraction_sft"] =
                static_cast<double>(sft_side.finished) /
                static_cast<double>(prompt_ids.size());
            doc["tds_unshifted_prop"] = tds.unshifted_prop;
            doc["tds_marginal_prop"] = tds.marginal_prop;
            doc["tds_shifted_prop"] = tds.shifted_prop;
            auto out = open_out(path_in("summary.json"));
            out << doc.dump(2) << '\n';
        }

        io::RunManifest manifest;
        manifest.subcommand = "eval";
        manifest.build_id = RLAM_BUILD_ID;
        manifest.seed = config.seed;
        manifest.config_snapshot = io::serialize_run_config(config);
        manifest.inputs = {{"checkpoint", ckpt_path},
                           {"reference_checkpoint", sft_path},
                           {"prompts", prompts_path},
                           {"frequency_model", model_path}};
        manifest.outputs = {{"metrics_rl", path_in("metrics_rl.csv")},
                            {"metrics_sft", path_in("metrics_sft.csv")},
                            {"rewards", path_in("rewards.csv")},
                            {"sari", path_in("sari.csv")},
                            {"tds", path_in("tds.json")},
                            {"tds_positions", path_in("tds_positions.csv")},
                            {"summary", path_in("summary.json")}};
        manifest.started_at = manifest.finished_at = io::utc_timestamp();
        io::write_manifest(manifest, path_in("manifest.json"));

        std::cout << "prompts=" << prompt_ids.size() << " wa_gain="
                  << fmt(wa_rl - wa_sft) << " sl_reduction=" << fmt(sl_sft - sl_rl)
                  << " out=" << out_dir << "\n";
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return kOk;
}

// ---- stats ----------------------------------------------------------------

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read csv: " + path);
    CsvTable table;
    std::string line;
    while (std::getline(in, line)) {
        strip_cr(line);
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            if (comma == std::string::npos) {
                cells.push_back(line.substr(start));
                break;
            }
            cells.push_back(line.substr(start, comma - start));
            start = comma + 1;
        }
        if (table.header.empty())
            table.header = std::move(cells);
        else if (!cells.empty() && cells[0] != "mean" && cells[0] != "std")
            table.rows.push_back(std::move(cells));
    }
    if (table.header.empty()) throw std::runtime_error("empty csv: " + path);
    return table;
}

int run_stats(const std::string& a_path, const std::string& b_path, double alpha,
              const std::string& out_path) {
    if (!readable(a_path)) return missing_input("csv", a_path);
    if (!readable(b_path)) return missing_input("csv", b_path);
    try {
        const auto a = read_csv(a_path);
        const auto b = read_csv(b_path);
        if (a.header != b.header)
            return fail("column mismatch between " + a_path + " and " + b_path);
        if (a.rows.size() != b.rows.size())
            return fail("row count mismatch: " + std::to_string(a.rows.size()) +
                        " vs " + std::to_string(b.rows.size()));
        if (a.rows.empty()) return fail("no document rows to compare");

        std::vector<analysis::TestResult> results;
        for (std::size_t col = 1; col < a.header.size(); ++col) {
            std::vector<double> xs, ys;
            for (std::size_t r = 0; r < a.rows.size(); ++r) {
                if (col >= a.rows[r].size() || col >= b.rows[r].size()) continue;
                const std::string& xa = a.rows[r][col];
                const std::string& xb = b.rows[r][col];
                if (xa.empty() || xb.empty()) continue;
                xs.push_back(std::stod(xa));
                ys.push_back(std::stod(xb));
            }
            if (xs.empty()) continue;  // metric absent from both files
            analysis::TestResult result;
            result.metric_name = a.header[col];
            if (xs.size() < 2) {
                result.degenerate = true;
                result.p_raw = 1.0;
            } else {
                const auto t = analysis::paired_t_test(xs, ys);
                result.t_statistic = t.t;
                result.p_raw = t.p_two_sided;
                result.degenerate = t.degenerate;
            }
            results.push_back(std::move(result));
        }
        if (results.empty()) return fail("no comparable metric columns");

        const auto adjusted = analysis::bonferroni(results, alpha);
        std::cout << "metric,t,p_raw,p_adjusted,significant,degenerate\n";
        for (const auto& r : adjusted)
            std::cout << r.metric_name << ',' << fmt(r.t_statistic) << ','
                      << fmt(r.p_raw) << ',' << fmt(r.p_adjusted) << ','
                      << (r.significant ? 1 : 0) << ',' << (r.degenerate ? 1 : 0)
                      << "\n";
        if (!out_path.empty()) {
            if (const auto parent = fs::path(out_path).parent_path();
                !parent.empty())
                fs::create_directories(parent);
            auto out = open_out(out_path);
            out << "# rlam-stats v1\n";
            out << "metric,t,p_raw,p_adjusted,significant,degenerate\n";
            for (const auto& r : adjusted)
                out << r.metric_name << ',' << fmt(r.t_statistic) << ','
                    << fmt(r.p_raw) << ',' << fmt(r.p_adjusted) << ','
                    << (r.significant ? 1 : 0) << ',' << (r.degenerate ? 1 : 0)
                    << '\n';
        }
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return kOk;
}

// ---- gen-corpus -------------------------------------------------------------

int run_gen_corpus(const std::string& out_dir, int vocab_size, int pairs,
                   int docs, std::uint64_t seed) {
    try {
        const auto vocab = toy::ToyVocabulary::create(vocab_size, pairs);
        const auto corpus = toy::generate_corpus(vocab, docs, seed);
        fs::create_directories(out_dir);
        const auto tsv = (fs::path(out_dir) / "corpus.tsv").string();
        write_prompts_tsv(corpus, tsv);

        io::RunManifest manifest;
        manifest.subcommand = "gen-corpus";
        manifest.build_id = RLAM_BUILD_ID;
        manifest.seed = seed;
        manifest.outputs = {{"corpus", tsv}};
        manifest.started_at = manifest.finished_at = io::utc_timestamp();
        io::write_manifest(manifest,
                           (fs::path(out_dir) / "manifest.json").string());
        std::cout << "docs=" << corpus.docs.size() << " out=" << tsv << "\n";
    } catch (const std::exception& e) {
        return fail(e.what());
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"accessibility-reward training laboratory"};
    app.require_subcommand(1);

    // build-freq
    std::string bf_corpus, bf_out;
    std::uint64_t bf_capacity = 100000;
    double bf_l2 = 1.0;
    int bf_feature_dim = 1 << 18;
    auto* build_freq = app.add_subcommand(
        "build-freq", "count a corpus and fit the accessibility scorer");
    build_freq->add_option("corpus", bf_corpus, "text corpus, one line per record")
        ->required();
    build_freq->add_option("-o,--out", bf_out, "output model path")
        ->envname("RLAM_OUT")
        ->required();
    build_freq->add_option("--capacity", bf_capacity, "exact-count table size");
    build_freq->add_option("--l2", bf_l2, "ridge penalty");
    build_freq->add_option("--feature-dim", bf_feature_dim,
                           "hashed feature dimension");

    // score
    std::string sc_docs, sc_model, sc_voa, sc_out;
    auto* score = app.add_subcommand(
        "score", "per-document readability and accessibility metrics");
    score->add_option("docs", sc_docs, "documents, one per line")->required();
    score->add_option("--freq", sc_model,
                      "frequency model path (accessibility columns need one)")
        ->envname("RLAM_FREQ_MODEL");
    score->add_option("--voa", sc_voa, "easy-word list path")
        ->envname("RLAM_VOA");
    score->add_option("-o,--out", sc_out, "output csv path")
        ->envname("RLAM_OUT")
        ->required();

    // train
    std::string tr_config, tr_out;
    std::vector<std::string> tr_sets;
    auto* train = app.add_subcommand("train", "run the toy training loop");
    train->add_option("--config", tr_config, "run config file")
        ->envname("RLAM_CONFIG");
    train->add_option("-o,--out", tr_out, "artifact directory")
        ->envname("RLAM_OUT")
        ->required();
    train->add_option("--set", tr_sets, "config override key=value");

    // eval
    std::string ev_ckpt, ev_sft, ev_prompts, ev_model, ev_out, ev_config;
    std::vector<std::string> ev_sets;
    auto* eval = app.add_subcommand("eval", "greedy-decode and report");
    eval->add_option("--checkpoint", ev_ckpt, "trained checkpoint")
        ->envname("RLAM_CHECKPOINT")
        ->required();
    eval->add_option("--sft", ev_sft, "reference checkpoint")
        ->envname("RLAM_SFT")
        ->required();
    eval->add_option("--prompts", ev_prompts, "prompt/target tsv")
        ->envname("RLAM_PROMPTS")
        ->required();
    eval->add_option("--freq", ev_model, "frequency model path")
        ->envname("RLAM_FREQ_MODEL")
        ->required();
    eval->add_option("-o,--out", ev_out, "artifact directory")
        ->envname("RLAM_OUT")
        ->required();
    eval->add_option("--config", ev_config, "run config file")
        ->envname("RLAM_CONFIG");
    eval->add_option("--set", ev_sets, "config override key=value");

    // stats
    std::string st_a, st_b, st_out;
    double st_alpha = 0.05;
    auto* stats = app.add_subcommand(
        "stats", "paired significance tests between two metric csvs");
    stats->add_option("csv_a", st_a, "first metrics csv")->required();
    stats->add_option("csv_b", st_b, "second metrics csv")->required();
    stats->add_option("--alpha", st_alpha, "family significance level");
    stats->add_option("-o,--out", st_out, "output csv path")->envname("RLAM_OUT");

    // gen-corpus
    std::string gc_out;
    int gc_vocab = 64, gc_pairs = 8, gc_docs = 64;
    std::uint64_t gc_seed = 1013;
    auto* gen_corpus =
        app.add_subcommand("gen-corpus", "emit a synthetic parallel corpus");
    gen_corpus->add_option("-o,--out", gc_out, "artifact directory")
        ->envname("RLAM_OUT")
        ->required();
    gen_corpus->add_option("--vocab-size", gc_vocab, "token inventory size");
    gen_corpus->add_option("--pairs", gc_pairs, "synonym pair count");
    gen_corpus->add_option("--docs", gc_docs, "document count");
    gen_corpus->add_option("--seed", gc_seed, "corpus seed");

    CLI11_PARSE(app, argc, argv);

    if (build_freq->parsed())
        return run_build_freq(bf_corpus, bf_out, bf_capacity, bf_l2,
                              bf_feature_dim);
    if (score->parsed()) return run_score(sc_docs, sc_model, sc_voa, sc_out);
    if (train->parsed()) return run_train(tr_config, tr_out, tr_sets);
    if (eval->parsed())
        return run_eval(ev_ckpt, ev_sft, ev_prompts, ev_model, ev_out, ev_config,
                        ev_sets);
    if (stats->parsed()) return run_stats(st_a, st_b, st_alpha, st_out);
    if (gen_corpus->parsed())
        return run_gen_corpus(gc_out, gc_vocab, gc_pairs, gc_docs, gc_seed);
    return kError;
}
