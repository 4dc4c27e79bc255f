// Python bindings for the core operations: tokenization, readability
// metrics, the frequency/accessibility model, the RL building blocks, the
// toy bigram lab, and the analysis helpers. The CLI remains the primary
// driver; this surface exists for scripting and smoke tests.
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rlam/analysis/stats.hpp"
#include "rlam/analysis/tds.hpp"
#include "rlam/freq/frequency_model.hpp"
#include "rlam/metrics/readability.hpp"
#include "rlam/metrics/sari.hpp"
#include "rlam/reward/reward.hpp"
#include "rlam/rl/gae.hpp"
#include "rlam/rl/kl_controller.hpp"
#include "rlam/rl/rollout.hpp"
#include "rlam/rl/train.hpp"
#include "rlam/text/tokenizer.hpp"
#include "rlam/toy/bigram_policy.hpp"
#include "rlam/toy/corpus.hpp"
#include "rlam/toy/vocabulary.hpp"

namespace py = pybind11;
using namespace rlam;

namespace {

py::dict report_to_dict(const metrics::MetricReport& r) {
    py::dict d;
    d["sentence_count"] = r.sentence_count;
    d["token_count"] = r.token_count;
    d["word_count"] = r.word_count;
    d["ari"] = r.ari;
    d["fk_grade"] = r.fk_grade;
    d["sentence_length"] = r.mean_sentence_length;
    d["word_length"] = r.mean_word_length;
    d["voa_log_ratio"] = r.voa ? py::cast(*r.voa) : py::none();
    d["word_accessibility"] =
        r.mean_word_accessibility ? py::cast(*r.mean_word_accessibility) : py::none();
    d["sentence_wa_std"] = r.sentence_accessibility_std
                               ? py::cast(*r.sentence_accessibility_std)
                               : py::none();
    return d;
}

reward::RewardKind kind_from_name(const std::string& name) {
    if (name == "accessibility") return reward::RewardKind::accessibility;
    if (name == "negated_ari") return reward::RewardKind::negated_ari;
    throw std::invalid_argument("unknown reward kind '" + name +
                                "' (accessibility | negated_ari)");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Accessibility-reward RL lab: tokenizer, metrics, frequency "
              "model, PPO toy loop, and analysis utilities.";

    // ---- text ------------------------------------------------------------
    m.def(
        "tokenize",
        [](const std::string& text) {
            return text::tokenize(text).sentences;
        },
        py::arg("text"),
        "Sentence-split and word-tokenize; returns a list of sentences, each "
        "a list of surface tokens.");
    m.def("detokenize", &text::detokenize, py::arg("tokens"),
          "Join tokens back into text with standard spacing rules.");

    // ---- metrics ---------------------------------------------------------
    m.def(
        "metric_report",
        [](const std::string& text, const freq::FrequencyModel* model,
           const std::optional<std::vector<std::string>>& voa_words) {
            const auto doc = text::tokenize(text);
            metrics::VoaLexicon lexicon;
            if (voa_words) lexicon = metrics::VoaLexicon::from_words(*voa_words);
            return report_to_dict(
                metrics::compute_report(doc, model, voa_words ? &lexicon : nullptr));
        },
        py::arg("text"), py::arg("model") = nullptr, py::arg("voa_words") = py::none(),
        "Per-document readability report. Accessibility fields need a "
        "frequency model, the VOA ratio needs a word list; absent inputs "
        "yield None fields.");
    m.def(
        "sari",
        [](const std::string& source, const std::string& candidate,
           const std::vector<std::string>& references) {
            return metrics::sari(source, candidate, references);
        },
        py::arg("source"), py::arg("candidate"), py::arg("references"),
        "Simplification score in [0, 100] from n-gram add/keep/delete "
        "quality against the source and references.");

    // ---- frequency model ---------------------------------------------------
    py::class_<freq::FrequencyModel>(m, "FrequencyModel")
        .def_readonly("total_tokens", &freq::FrequencyModel::total_tokens)
        .def_property_readonly(
            "table_size",
            [](const freq::FrequencyModel& f) { return f.table.size(); })
        .def("word_accessibility", &freq::FrequencyModel::word_accessibility,
             py::arg("token"),
             "ln(frequency per 1e9 tokens); ridge-regressed estimate for "
             "words outside the count table.")
        .def("in_table", &freq::FrequencyModel::in_table, py::arg("token"))
        .def(
            "save",
            [](const freq::FrequencyModel& f, const std::string& path) {
                freq::save_frequency_model(f, path);
            },
            py::arg("path"));
    m.def(
        "fit_frequency_model",
        [](const std::unordered_map<std::string, std::uint64_t>& counts,
           std::uint64_t total_tokens, std::uint64_t capacity, double l2,
           std::int32_t feature_dim) {
            freq::FrequencyModelConfig cfg;
            cfg.capacity = capacity;
            cfg.l2 = l2;
            cfg.feature_dim = feature_dim;
            return freq::fit_frequency_model(counts, total_tokens, cfg);
        },
        py::arg("counts"), py::arg("total_tokens"), py::arg("capacity") = 100000,
        py::arg("l2") = 1.0, py::arg("feature_dim") = 1 << 18,
        "Fit the accessibility scorer from word-type counts.");
    m.def("load_frequency_model", &freq::load_frequency_model, py::arg("path"));
    m.def(
        "count_word_tokens",
        [](const std::string& text) {
            std::unordered_map<std::string, std::uint64_t> counts;
            const auto total = freq::count_word_tokens(text, counts);
            return py::make_tuple(counts, total);
        },
        py::arg("text"),
        "Word-token counts of one document: (counts dict, token total).");

    // ---- rl building blocks ------------------------------------------------
    m.def("gae_advantages", &rl::gae_advantages, py::arg("rewards"), py::arg("values"),
          py::arg("gamma"), py::arg("lam"),
          "Generalized advantage estimation by backward recursion.");

    py::class_<rl::KlController>(m, "KlController")
        .def(py::init([](double beta, double target, double gain, double error_clip,
                         double min_beta, double max_beta) {
                 return rl::KlController{beta, target, gain, error_clip, min_beta,
                                         max_beta};
             }),
             py::arg("beta") = 0.2, py::arg("target") = 8.0, py::arg("gain") = 0.01,
             py::arg("error_clip") = 0.2, py::arg("min_beta") = 0.15,
             py::arg("max_beta") = 0.25)
        .def_readwrite("beta", &rl::KlController::beta)
        .def_readwrite("target", &rl::KlController::target)
        .def_readwrite("gain", &rl::KlController::gain)
        .def_readwrite("error_clip", &rl::KlController::error_clip)
        .def_readwrite("min_beta", &rl::KlController::min_beta)
        .def_readwrite("max_beta", &rl::KlController::max_beta)
        .def(
            "step",
            [](rl::KlController& c, double measured_kl) {
                return rl::kl_controller_step(c, measured_kl);
            },
            py::arg("measured_kl"),
            "One proportional update toward the target; returns the new "
            "coefficient.");

    py::class_<rl::PpoConfig>(m, "PpoConfig")
        .def(py::init<>())
        .def_readwrite("gamma", &rl::PpoConfig::gamma)
        .def_readwrite("gae_lambda", &rl::PpoConfig::gae_lambda)
        .def_readwrite("clip_epsilon", &rl::PpoConfig::clip_epsilon)
        .def_readwrite("epochs", &rl::PpoConfig::epochs)
        .def_readwrite("micro_batch", &rl::PpoConfig::micro_batch)
        .def_readwrite("grad_accum", &rl::PpoConfig::grad_accum)
        .def_readwrite("lr", &rl::PpoConfig::lr)
        .def_readwrite("adam_beta1", &rl::PpoConfig::adam_beta1)
        .def_readwrite("adam_beta2", &rl::PpoConfig::adam_beta2)
        .def_readwrite("adam_eps", &rl::PpoConfig::adam_eps)
        .def_readwrite("weight_decay", &rl::PpoConfig::weight_decay)
        .def_readwrite("value_coef", &rl::PpoConfig::value_coef)
        .def_readwrite("temperature", &rl::PpoConfig::temperature)
        .def_readwrite("max_new_tokens", &rl::PpoConfig::max_new_tokens)
        .def_readwrite("whiten_advantages", &rl::PpoConfig::whiten_advantages)
        .def_readwrite("seed", &rl::PpoConfig::seed)
        .def("batch_size", &rl::PpoConfig::batch_size);

    py::class_<rl::TrainStepStats>(m, "TrainStepStats")
        .def_readonly("step", &rl::TrainStepStats::step)
        .def_readonly("reward_mean", &rl::TrainStepStats::reward_mean)
        .def_readonly("reward_std", &rl::TrainStepStats::reward_std)
        .def_readonly("kl", &rl::TrainStepStats::kl)
        .def_readonly("beta_kl", &rl::TrainStepStats::beta_kl)
        .def_readonly("clip_fraction", &rl::TrainStepStats::clip_fraction)
        .def_readonly("policy_loss", &rl::TrainStepStats::policy_loss)
        .def_readonly("value_loss", &rl::TrainStepStats::value_loss)
        .def_readonly("sentence_spread", &rl::TrainStepStats::sentence_spread)
        .def_readonly("finished_fraction", &rl::TrainStepStats::finished_fraction)
        .def_readonly("unstable", &rl::TrainStepStats::unstable);

    py::class_<rl::TrainResult>(m, "TrainResult")
        .def_readonly("log", &rl::TrainResult::log)
        .def_readonly("steps_completed", &rl::TrainResult::steps_completed)
        .def_readonly("halted", &rl::TrainResult::halted)
        .def_readonly("halt_reason", &rl::TrainResult::halt_reason);

    // ---- toy lab -----------------------------------------------------------
    py::class_<toy::ToyVocabulary>(m, "ToyVocabulary")
        .def_static("create", &toy::ToyVocabulary::create, py::arg("vocab_size"),
                    py::arg("synonym_pairs"))
        .def_property_readonly("size", &toy::ToyVocabulary::size)
        .def("token", &toy::ToyVocabulary::token, py::arg("id"))
        .def("id_of", &toy::ToyVocabulary::id_of, py::arg("token"))
        .def("is_word", &toy::ToyVocabulary::is_word, py::arg("id"))
        .def("synonym_pairs", &toy::ToyVocabulary::synonym_pairs,
             "(rare id, common id) pairs.")
        .def("filler_ids", &toy::ToyVocabulary::filler_ids)
        .def("sample_weight", &toy::ToyVocabulary::sample_weight, py::arg("id"))
        .def("zipf_rank", &toy::ToyVocabulary::zipf_rank, py::arg("id"))
        .def("decode", &toy::ToyVocabulary::decode, py::arg("ids"))
        .def_readonly_static("PERIOD", &toy::ToyVocabulary::kPeriod)
        .def_readonly_static("SEPARATOR", &toy::ToyVocabulary::kSeparator)
        .def_readonly_static("EOS", &toy::ToyVocabulary::kEos)
        .def_readonly_static("FIRST_WORD", &toy::ToyVocabulary::kFirstWord);

    py::class_<toy::ToyDocument>(m, "ToyDocument")
        .def_readonly("source", &toy::ToyDocument::source)
        .def_readonly("target", &toy::ToyDocument::target)
        .def_readonly("source_text", &toy::ToyDocument::source_text)
        .def_readonly("target_text", &toy::ToyDocument::target_text)
        .def("prompt", &toy::ToyDocument::prompt, py::arg("vocab"),
             "Conditioning prefix: source ids plus the separator.");

    py::class_<toy::ToyCorpus>(m, "ToyCorpus")
        .def_readonly("docs", &toy::ToyCorpus::docs);

    m.def("generate_corpus", &toy::generate_corpus, py::arg("vocab"),
          py::arg("n_docs"), py::arg("seed"));
    m.def("fit_sft", &toy::fit_sft, py::arg("vocab"), py::arg("corpus"),
          py::arg("alpha") = 1.0,
          "Add-alpha smoothed bigram fit over the corpus targets.");
    m.def("build_toy_frequency_model", &toy::build_toy_frequency_model,
          py::arg("vocab"));
    m.def("encode_text", &toy::encode_text, py::arg("vocab"), py::arg("text"));

    py::class_<toy::BigramPolicy>(m, "BigramPolicy")
        .def(py::init<int>(), py::arg("vocab") = 0)
        .def_readwrite("logits", &toy::BigramPolicy::logits)
        .def_property_readonly("vocab_size", &toy::BigramPolicy::vocab_size)
        .def("row_log_probs", &toy::BigramPolicy::row_log_probs, py::arg("prev"))
        .def("row_probs", &toy::BigramPolicy::row_probs, py::arg("prev"),
             py::arg("temperature"))
        .def("greedy", &toy::BigramPolicy::greedy, py::arg("prev"));

    py::class_<toy::TabularValue>(m, "TabularValue")
        .def(py::init<int>(), py::arg("vocab") = 0)
        .def_readwrite("v", &toy::TabularValue::v)
        .def("value", &toy::TabularValue::value, py::arg("state"));

    m.def("greedy_decode", &rl::greedy_decode, py::arg("policy"), py::arg("prompt"),
          py::arg("eos_id"), py::arg("max_new_tokens"),
          "Argmax decode; returns emitted tokens including the final eos "
          "when one is produced.");

    // ---- reward ------------------------------------------------------------
    m.def(
        "terminal_reward",
        [](const std::string& text, bool finished, const freq::FrequencyModel& model,
           const std::string& kind, double wa_weight, double sl_weight,
           double wa_floor, double unfinished_penalty) {
            reward::RewardConfig cfg;
            cfg.kind = kind_from_name(kind);
            cfg.wa_weight = wa_weight;
            cfg.sl_weight = sl_weight;
            cfg.wa_floor = wa_floor;
            cfg.unfinished_penalty = unfinished_penalty;
            const auto r = reward::terminal_reward(text, finished, model, cfg);
            py::dict d;
            d["total"] = r.total;
            d["wa_component"] = r.wa_component;
            d["sl_component"] = r.sl_component;
            d["word_accessibility"] = r.mean_word_accessibility;
            d["sentence_wa_std"] = r.sentence_accessibility_std;
            d["finished"] = r.finished;
            d["degenerate"] = r.degenerate;
            return d;
        },
        py::arg("text"), py::arg("finished"), py::arg("model"),
        py::arg("kind") = "accessibility", py::arg("wa_weight") = 4.0,
        py::arg("sl_weight") = 0.1, py::arg("wa_floor") = 10.0,
        py::arg("unfinished_penalty") = -10.0,
        "Sequence-level reward with its components; unfinished or "
        "unmeasurable text scores the fixed penalty.");

    // ---- training loop -------------------------------------------------------
    m.def(
        "train",
        [](toy::BigramPolicy& policy, const toy::BigramPolicy& reference,
           toy::TabularValue& value, const std::vector<std::vector<int>>& prompts,
           int eos_id, const py::function& scorer, const rl::PpoConfig& cfg,
           rl::KlController& controller, int steps, double instability_threshold,
           const std::optional<py::function>& on_step) {
            rl::TrainOptions options;
            options.steps = steps;
            options.instability_threshold = instability_threshold;
            if (on_step)
                options.on_step = [&](const rl::TrainStepStats& s) { (*on_step)(s); };
            rl::GenerationScorer wrapped =
                [&](const std::vector<int>& tokens, bool finished) {
                    const py::object result = scorer(tokens, finished);
                    rl::ScoredGeneration scored;
                    if (py::isinstance<py::tuple>(result)) {
                        const auto tup = result.cast<py::tuple>();
                        scored.reward = tup[0].cast<double>();
                        if (tup.size() > 1 && !tup[1].is_none())
                            scored.sentence_spread = tup[1].cast<double>();
                    } else {
                        scored.reward = result.cast<double>();
                    }
                    return scored;
                };
            return rl::train(policy, reference, value, prompts, eos_id, wrapped, cfg,
                             controller, options);
        },
        py::arg("policy"), py::arg("reference"), py::arg("value"), py::arg("prompts"),
        py::arg("eos_id"), py::arg("scorer"), py::arg("config"),
        py::arg("controller"), py::arg("steps") = 300,
        py::arg("instability_threshold") = 0.6, py::arg("on_step") = py::none(),
        "Full PPO loop over the prompts. `scorer(tokens, finished)` returns "
        "the terminal reward, or a (reward, sentence_spread) tuple.");

    // ---- analysis ------------------------------------------------------------
    py::class_<analysis::TdsReport>(m, "TdsReport")
        .def_readonly("unshifted_count", &analysis::TdsReport::unshifted_count)
        .def_readonly("marginal_count", &analysis::TdsReport::marginal_count)
        .def_readonly("shifted_count", &analysis::TdsReport::shifted_count)
        .def_readonly("unshifted_prop", &analysis::TdsReport::unshifted_prop)
        .def_readonly("marginal_prop", &analysis::TdsReport::marginal_prop)
        .def_readonly("shifted_prop", &analysis::TdsReport::shifted_prop)
        .def_readonly("tokens_by_decile", &analysis::TdsReport::tokens_by_decile)
        .def_readonly("marginal_rate_by_decile",
                      &analysis::TdsReport::marginal_rate_by_decile)
        .def_readonly("shifted_rate_by_decile",
                      &analysis::TdsReport::shifted_rate_by_decile)
        .def("total", &analysis::TdsReport::total);

    m.def("tds_analyze", &analysis::tds_analyze, py::arg("rl_policy"),
          py::arg("reference_policy"), py::arg("prompts"), py::arg("eos_id"),
          py::arg("max_new_tokens"),
          "Classify greedy-decoded tokens by their rank under the reference "
          "policy: rank 1 unshifted, 2-3 marginal, deeper shifted.");

    py::class_<analysis::PairedTestResult>(m, "PairedTestResult")
        .def_readonly("t", &analysis::PairedTestResult::t)
        .def_readonly("df", &analysis::PairedTestResult::df)
        .def_readonly("p_two_sided", &analysis::PairedTestResult::p_two_sided)
        .def_readonly("p_one_sided", &analysis::PairedTestResult::p_one_sided)
        .def_readonly("degenerate", &analysis::PairedTestResult::degenerate);

    m.def("paired_t_test", &analysis::paired_t_test, py::arg("xs"), py::arg("ys"));
    m.def("student_t_two_sided_p", &analysis::student_t_two_sided_p, py::arg("t"),
          py::arg("df"));
    m.def(
        "bonferroni",
        [](const std::vector<double>& p_values, double alpha) {
            std::vector<analysis::TestResult> family(p_values.size());
            for (std::size_t i = 0; i < p_values.size(); ++i)
                family[i].p_raw = p_values[i];
            const auto adjusted = analysis::bonferroni(family, alpha);
            std::vector<std::pair<double, bool>> out;
            out.reserve(adjusted.size());
            for (const auto& r : adjusted)
                out.emplace_back(r.p_adjusted, r.significant);
            return out;
        },
        py::arg("p_values"), py::arg("alpha") = 0.05,
        "Family-wise correction: returns (adjusted p, significant) per test.");

    m.attr("__all__") = py::make_tuple(
        "tokenize", "detokenize", "metric_report", "sari", "FrequencyModel",
        "fit_frequency_model", "load_frequency_model", "count_word_tokens",
        "gae_advantages", "KlController", "PpoConfig", "TrainStepStats",
        "TrainResult", "ToyVocabulary", "ToyDocument", "ToyCorpus",
        "generate_corpus", "fit_sft", "build_toy_frequency_model", "encode_text",
        "BigramPolicy", "TabularValue", "greedy_decode", "terminal_reward", "train",
        "TdsReport", "tds_analyze", "PairedTestResult", "paired_t_test",
        "student_t_two_sided_p", "bonferroni");
}
