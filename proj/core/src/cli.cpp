#include "srli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "srli/errors.hpp"
#include "srli/evaluation.hpp"
#include "srli/training.hpp"

namespace srli::cli {

namespace {

ConllFormat parse_format(const std::string& s) {
    return s == "conll2009" ? ConllFormat::Conll2009 : ConllFormat::Conll2008;
}

SyntaxColumns parse_syntax(const std::string& s) {
    return s == "pred" ? SyntaxColumns::Predicted : SyntaxColumns::Gold;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    return out;
}

std::vector<Sentence> read_corpus(const std::string& path, ConllFormat format,
                                  SyntaxColumns syntax) {
    std::ifstream in = open_input(path);
    return parse_conll(in, format, syntax);
}

// Shared corpus/format/syntax flags.
struct CorpusFlags {
    std::string format = "conll2008";
    std::string syntax = "gold";

    void attach(CLI::App* cmd) {
        cmd->add_option("--format", format, "Corpus format")
            ->check(CLI::IsMember({"conll2008", "conll2009"}));
        cmd->add_option("--syntax", syntax, "Use gold or predicted syntax columns")
            ->check(CLI::IsMember({"gold", "pred"}));
    }
    ConllFormat fmt() const { return parse_format(format); }
    SyntaxColumns syn() const { return parse_syntax(syntax); }
};

struct TrainFlags {
    TrainConfig config;

    void attach(CLI::App* cmd) {
        cmd->add_option("--roles", config.numRoles, "Number of induced roles");
        cmd->add_option("--dim-d", config.dimD, "Embedding dimensionality d");
        cmd->add_option("--dim-k", config.dimK, "Projection dimensionality k");
        cmd->add_option("--negatives", config.negatives, "Negative samples per argument");
        cmd->add_option("--epochs", config.epochs, "Training epochs");
        cmd->add_option("--lr", config.learningRate, "AdaGrad learning rate");
        cmd->add_option("--adagrad-eps", config.adagradEpsilon, "AdaGrad epsilon");
        cmd->add_option("--init-scale", config.initScale, "Uniform init half-width");
        cmd->add_option("--clip-norm", config.clipNorm, "Per-instance gradient clip (0 = off)");
        cmd->add_option("--seed", config.seed, "Random seed");
        cmd->add_flag("--deterministic", config.deterministic, "Force serial, reproducible training");
        cmd->add_option("--min-lemma-freq", config.minLemmaFreq, "Lemma frequency cutoff");
        cmd->add_option("--pred-min-freq", config.predMinFreq,
                        "Predicate frequency for predicate-specific matrices");
        cmd->add_option("--threads", config.threads, "Worker threads for batch gradients");
        cmd->add_option("--batch-size", config.batchSize, "Instances per AdaGrad step");
    }
};

// Instances of one sentence with labels written back into per-predicate
// columns aligned with the APRED block.
std::vector<std::vector<std::string>> role_columns(const Sentence& s,
                                                   const std::vector<PredicateInstance>& insts,
                                                   const std::vector<std::vector<std::uint32_t>>& roles) {
    std::vector<std::vector<std::string>> cols(s.predicates.size(),
                                               std::vector<std::string>(s.tokens.size(), "_"));
    for (std::size_t p = 0; p < s.predicates.size(); ++p) {
        for (std::size_t i = 0; i < insts.size(); ++i) {
            if (insts[i].predTokenIndex != s.predicates[p].tokenIndex) continue;
            for (std::size_t a = 0; a < insts[i].args.size(); ++a)
                cols[p][static_cast<std::size_t>(insts[i].args[a].argNodeIndex) - 1] =
                    "R" + std::to_string(roles[i][a]);
        }
    }
    return cols;
}

int cmd_train(const std::string& corpusPath, const CorpusFlags& cf, TrainFlags& tf,
              const std::string& modelPath, const std::string& tracePath, std::ostream& err) {
    std::vector<Sentence> sentences = read_corpus(corpusPath, cf.fmt(), cf.syn());
    std::vector<InstanceDraft> drafts;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        auto d = draft_instances(sentences[i], static_cast<int>(i));
        drafts.insert(drafts.end(), std::make_move_iterator(d.begin()),
                      std::make_move_iterator(d.end()));
    }
    if (drafts.empty()) throw TrainingError("corpus has no verbal predicate instances");

    Vocabulary vocab = build_vocabulary(drafts, tf.config.minLemmaFreq);
    std::vector<PredicateInstance> instances = instances_from_drafts(drafts, vocab, true);
    err << "corpus: " << sentences.size() << " sentences, " << instances.size()
        << " instances; vocab: " << vocab.argLemmas.size() << " lemmas, "
        << vocab.features.size() << " features, " << vocab.predicates.size() << " predicates\n";

    TrainResult result = train(instances, vocab, tf.config);
    for (const EpochStats& e : result.trace)
        err << "epoch " << e.epoch << ": mean loss " << e.meanLoss << " (skipped "
            << e.instancesSkipped << ")\n";

    ModelBundle bundle{tf.config, std::move(vocab), std::move(result.params)};
    save_model(bundle, modelPath);
    err << "model written to " << modelPath << "\n";

    if (!tracePath.empty()) {
        std::ofstream traceOut = open_output(tracePath);
        write_loss_trace(result.trace, traceOut);
    }
    return 0;
}

int cmd_label(const std::string& modelPath, const std::string& corpusPath, const CorpusFlags& cf,
              const std::string& outPath, std::ostream& out, std::ostream& err) {
    ModelBundle model = load_model(modelPath);
    std::ifstream in = open_input(corpusPath);

    std::ofstream fileOut;
    std::ostream* sink = &out;
    if (outPath != "-") {
        fileOut = open_output(outPath);
        sink = &fileOut;
    }

    std::size_t sentenceId = 0, labeled = 0;
    for_each_sentence(in, cf.fmt(), cf.syn(), [&](Sentence&& s) {
        auto drafts = draft_instances(s, static_cast<int>(sentenceId));
        auto insts = instances_from_drafts(drafts, model.vocab, true);
        std::vector<std::vector<std::uint32_t>> roles;
        roles.reserve(insts.size());
        for (const PredicateInstance& inst : insts) {
            roles.push_back(label(inst, model.params.enc));
            labeled += inst.args.size();
        }
        *sink << echo_with_columns(s, role_columns(s, insts, roles)) << '\n';
        ++sentenceId;
    });
    err << "labeled " << labeled << " arguments in " << sentenceId << " sentences\n";
    return 0;
}

// Cluster labels of the predicted file: the appended role block when present,
// otherwise the APRED strings themselves (so a gold file evaluates perfectly
// against itself).
std::string predicted_label(const Sentence& pred, std::size_t predIdx, int argTok) {
    if (!pred.extraColumns.empty()) {
        const auto& cells = pred.extraColumns[static_cast<std::size_t>(argTok) - 1];
        if (predIdx >= cells.size())
            throw EvaluationError("prediction file lacks an induced-role column for predicate " +
                                  std::to_string(predIdx + 1));
        return cells[predIdx];
    }
    for (const auto& [tok, role] : pred.predicates[predIdx].args)
        if (tok == argTok) return role;
    return "_";
}

int cmd_evaluate(const std::string& predPath, const std::string& goldPath, const CorpusFlags& cf,
                 const std::string& outPath, const std::string& systemName, std::ostream& out) {
    std::vector<Sentence> gold = read_corpus(goldPath, cf.fmt(), cf.syn());
    std::vector<Sentence> pred = read_corpus(predPath, cf.fmt(), cf.syn());
    if (gold.size() != pred.size())
        throw EvaluationError("gold and prediction files have different sentence counts (" +
                              std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) +
                              ")");

    std::map<std::string, std::uint32_t> clusterIds;
    std::vector<LabeledArgument> args;
    for (std::size_t si = 0; si < gold.size(); ++si) {
        if (gold[si].tokens.size() != pred[si].tokens.size() ||
            gold[si].predicates.size() != pred[si].predicates.size())
            throw EvaluationError("sentence " + std::to_string(si + 1) +
                                  " differs between gold and prediction files");
        auto drafts = draft_instances(gold[si], static_cast<int>(si));
        for (const InstanceDraft& d : drafts) {
            std::size_t predIdx = 0;
            while (predIdx < gold[si].predicates.size() &&
                   gold[si].predicates[predIdx].tokenIndex != d.predTokenIndex)
                ++predIdx;
            for (const ArgumentDraft& a : d.args) {
                std::string cell = predicted_label(pred[si], predIdx, a.argNodeIndex);
                if (cell == "_")
                    throw EvaluationError("sentence " + std::to_string(si + 1) + ", token " +
                                          std::to_string(a.argNodeIndex) +
                                          ": no predicted role");
                auto [it, inserted] =
                    clusterIds.emplace(cell, static_cast<std::uint32_t>(clusterIds.size()));
                args.push_back({d.predicateLemma, a.goldRole, it->second});
            }
        }
    }

    ClusterEvaluation eval = evaluate_clustering(args);
    std::vector<ReportRow> rows{make_report_row(systemName, eval)};
    if (outPath.empty())
        out << format_report_text(rows);
    else
        open_output(outPath) << format_report_csv(rows);
    return 0;
}

int cmd_baseline(const std::string& corpusPath, const CorpusFlags& cf, const std::string& outPath,
                 std::ostream& out) {
    std::vector<Sentence> sentences = read_corpus(corpusPath, cf.fmt(), cf.syn());
    std::vector<InstanceDraft> drafts;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        auto d = draft_instances(sentences[i], static_cast<int>(i));
        drafts.insert(drafts.end(), std::make_move_iterator(d.begin()),
                      std::make_move_iterator(d.end()));
    }
    Vocabulary vocab = build_vocabulary(drafts, 1);
    std::vector<PredicateInstance> instances = instances_from_drafts(drafts, vocab, true);

    std::vector<std::vector<std::uint32_t>> clusters = syntf_baseline(instances, vocab.deprels);
    std::vector<LabeledArgument> args;
    for (std::size_t i = 0; i < instances.size(); ++i)
        for (std::size_t a = 0; a < instances[i].args.size(); ++a)
            args.push_back({instances[i].predicateLemma, instances[i].args[a].goldRole,
                            clusters[i][a]});

    ClusterEvaluation eval = evaluate_clustering(args);
    std::vector<ReportRow> rows{make_report_row("SyntF", eval)};
    if (outPath.empty())
        out << format_report_text(rows);
    else
        open_output(outPath) << format_report_csv(rows);
    return 0;
}

int cmd_inspect(const std::string& modelPath, const std::string& corpusPath, const CorpusFlags& cf,
                const std::string& dumpVocabDir, std::ostream& out) {
    ModelBundle model = load_model(modelPath);
    const TrainConfig& c = model.config;
    out << "model file: " << modelPath << "\n"
        << "format version: 1\n"
        << "roles: " << c.numRoles << "  d: " << c.dimD << "  k: " << c.dimK
        << "  negatives: " << c.negatives << "\n"
        << "epochs: " << c.epochs << "  lr: " << c.learningRate << "  seed: " << c.seed << "\n"
        << "vocab: " << model.vocab.argLemmas.size() << " lemmas, " << model.vocab.features.size()
        << " features, " << model.vocab.predicates.size() << " predicates, "
        << model.vocab.deprels.size() << " deprels\n"
        << "predicate-specific matrix sets: " << model.params.dec.cPred.size() << "\n";

    if (!dumpVocabDir.empty()) {
        std::filesystem::create_directories(dumpVocabDir);
        auto dump = [&](const StringIndex& v, const std::string& kind) {
            std::ofstream f = open_output(dumpVocabDir + "/" + kind + ".vocab");
            save_vocabulary(v, kind, f);
        };
        dump(model.vocab.argLemmas, "argLemmas");
        dump(model.vocab.features, "features");
        dump(model.vocab.predicates, "predicates");
        dump(model.vocab.deprels, "deprels");
        out << "vocabularies dumped to " << dumpVocabDir << "\n";
    }

    if (!corpusPath.empty()) {
        std::vector<Sentence> sentences = read_corpus(corpusPath, cf.fmt(), cf.syn());
        std::vector<std::uint64_t> counts(c.numRoles, 0);
        std::uint64_t total = 0;
        for (std::size_t i = 0; i < sentences.size(); ++i) {
            auto drafts = draft_instances(sentences[i], static_cast<int>(i));
            auto insts = instances_from_drafts(drafts, model.vocab, true);
            for (const PredicateInstance& inst : insts)
                for (std::uint32_t r : label(inst, model.params.enc)) {
                    ++counts[r];
                    ++total;
                }
        }
        std::uint32_t used = 0;
        for (std::uint64_t n : counts)
            if (total > 0 && 100.0 * static_cast<double>(n) / static_cast<double>(total) >= 1.0)
                ++used;
        out << "arguments labeled: " << total << "\n"
            << "effectively used roles (>= 1% of argmax assignments): " << used << " of "
            << c.numRoles << "\n";
    }
    return 0;
}

int cmd_synth(const SyntheticSpec& spec, int holdout, const std::string& outPath,
              const std::string& holdoutPath, ConllFormat format, std::ostream& err) {
    if (holdout > 0 && holdoutPath.empty())
        throw ConfigError("--holdout requires --holdout-out");

    SyntheticSpec full = spec;
    full.instances = spec.instances + holdout;
    std::vector<Sentence> sentences = generate_synthetic(full);

    std::ofstream out = open_output(outPath);
    for (int i = 0; i < spec.instances; ++i)
        out << serialize_sentence(sentences[static_cast<std::size_t>(i)], format) << '\n';
    err << "wrote " << spec.instances << " synthetic sentences to " << outPath << "\n";

    if (holdout > 0) {
        std::ofstream hold = open_output(holdoutPath);
        for (int i = spec.instances; i < full.instances; ++i)
            hold << serialize_sentence(sentences[static_cast<std::size_t>(i)], format) << '\n';
        err << "wrote " << holdout << " held-out sentences to " << holdoutPath << "\n";
    }
    return 0;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Unsupervised semantic role induction"};
    app.require_subcommand(1);

    // train
    auto* train = app.add_subcommand("train", "Induce a role labeler from a CoNLL corpus");
    std::string trainCorpus, trainModel, trainTrace;
    CorpusFlags trainCf;
    TrainFlags trainTf;
    train->add_option("--corpus", trainCorpus, "Training corpus")->required();
    train->add_option("--model", trainModel, "Output model path")->required();
    train->add_option("--loss-trace", trainTrace, "Per-epoch loss CSV");
    trainCf.attach(train);
    trainTf.attach(train);

    // label
    auto* labelCmd = app.add_subcommand("label", "Label a corpus with induced roles");
    std::string labelModel, labelCorpus, labelOut = "-";
    CorpusFlags labelCf;
    labelCmd->add_option("--model", labelModel, "Model path")->required();
    labelCmd->add_option("--corpus", labelCorpus, "Corpus to label")->required();
    labelCmd->add_option("--out", labelOut, "Labeled output path ('-' for stdout)");
    labelCf.attach(labelCmd);

    // evaluate
    auto* evalCmd = app.add_subcommand("evaluate", "Score predictions against gold roles");
    std::string evalPred, evalGold, evalOut, evalName = "model";
    CorpusFlags evalCf;
    evalCmd->add_option("--pred", evalPred, "Labeled corpus")->required();
    evalCmd->add_option("--gold", evalGold, "Gold corpus")->required();
    evalCmd->add_option("--out", evalOut, "Report CSV path (default: text to stdout)");
    evalCmd->add_option("--name", evalName, "System name in the report");
    evalCf.attach(evalCmd);

    // baseline
    auto* baseCmd = app.add_subcommand("baseline", "Run the SyntF baseline end to end");
    std::string baseCorpus, baseOut;
    CorpusFlags baseCf;
    baseCmd->add_option("--corpus", baseCorpus, "Gold corpus")->required();
    baseCmd->add_option("--out", baseOut, "Report CSV path (default: text to stdout)");
    baseCf.attach(baseCmd);

    // synth
    auto* synthCmd = app.add_subcommand("synth", "Generate a synthetic role-labeled corpus");
    SyntheticSpec spec;
    std::string synthOut, synthHoldoutOut, synthFormat = "conll2008";
    int holdout = 0;
    synthCmd->add_option("--out", synthOut, "Output corpus path")->required();
    synthCmd->add_option("--instances", spec.instances, "Number of sentences");
    synthCmd->add_option("--roles", spec.numRoles, "Number of gold roles");
    synthCmd->add_option("--predicates", spec.numPredicates, "Number of predicates");
    synthCmd->add_option("--lemmas-per-role", spec.lemmasPerRole, "Lemma pool size per role");
    synthCmd->add_option("--noise", spec.noiseRate, "Off-role lemma probability");
    synthCmd->add_option("--cue-accuracy", spec.cueAccuracy, "Deprel cue correctness");
    synthCmd->add_option("--seed", spec.seed, "Random seed");
    synthCmd->add_option("--holdout", holdout, "Extra held-out sentences");
    synthCmd->add_option("--holdout-out", synthHoldoutOut, "Held-out output path");
    synthCmd->add_option("--format", synthFormat, "Corpus format")
        ->check(CLI::IsMember({"conll2008", "conll2009"}));

    // inspect
    auto* inspectCmd = app.add_subcommand("inspect", "Print model header and role usage");
    std::string inspectModel, inspectCorpus, inspectDump;
    CorpusFlags inspectCf;
    inspectCmd->add_option("--model", inspectModel, "Model path")->required();
    inspectCmd->add_option("--corpus", inspectCorpus, "Corpus for role-usage statistics");
    inspectCmd->add_option("--dump-vocab", inspectDump, "Directory for vocabulary dumps");
    inspectCf.attach(inspectCmd);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(std::move(reversed));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (train->parsed())
            return cmd_train(trainCorpus, trainCf, trainTf, trainModel, trainTrace, err);
        if (labelCmd->parsed())
            return cmd_label(labelModel, labelCorpus, labelCf, labelOut, out, err);
        if (evalCmd->parsed())
            return cmd_evaluate(evalPred, evalGold, evalCf, evalOut, evalName, out);
        if (baseCmd->parsed()) return cmd_baseline(baseCorpus, baseCf, baseOut, out);
        if (synthCmd->parsed())
            return cmd_synth(spec, holdout, synthOut, synthHoldoutOut, parse_format(synthFormat),
                             err);
        if (inspectCmd->parsed())
            return cmd_inspect(inspectModel, inspectCorpus, inspectCf, inspectDump, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace srli::cli
