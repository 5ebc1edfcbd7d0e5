// cse: select, encode, decode and inspect compressed serial-episode models.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cse/cse.hpp"

namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct SelectionFlags {
  std::string algo = "csc2";
  cse::Time max_gap = 5;
  std::optional<double> freq_threshold;
  std::optional<std::size_t> max_len;
  std::optional<std::size_t> max_patterns;
  unsigned threads = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--algo", algo, "candidate generator")->check(CLI::IsMember({"csc1", "csc2"}));
    cmd->add_option("--max-gap", max_gap, "largest inter-event gap")->check(CLI::PositiveNumber);
    cmd->add_option("--freq-threshold", freq_threshold, "frequency threshold as a fraction of |D| (csc1 only)")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--max-len", max_len, "longest episode to mine")->check(CLI::PositiveNumber);
    cmd->add_option("--max-patterns", max_patterns, "cap on selected multi-node episodes")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--threads", threads, "miner workers (default: CSE_THREADS or 1)");
  }

  cse::SelectionConfig config() const {
    cse::SelectionConfig cfg;
    cfg.algorithm = algo == "csc1" ? cse::Algorithm::kCsc1 : cse::Algorithm::kCsc2;
    if (cfg.algorithm == cse::Algorithm::kCsc2 && freq_threshold)
      throw cse::InvalidArgument("--freq-threshold applies to csc1 only; csc2 needs no threshold");
    cfg.max_patterns = max_patterns;
    cfg.miner.max_gap = max_gap;
    cfg.miner.freq_threshold = freq_threshold.value_or(0.0);
    cfg.miner.max_episode_len = max_len;
    cfg.miner.threads = threads;
    if (cfg.miner.threads == 0) {
      if (const char* env = std::getenv("CSE_THREADS")) {
        try {
          cfg.miner.threads = static_cast<unsigned>(std::stoul(env));
        } catch (const std::exception&) {
          throw cse::InvalidArgument("CSE_THREADS must be a non-negative integer");
        }
      }
    }
    return cfg;
  }

  json echo() const {
    json j{{"algo", algo}, {"max_gap", max_gap}};
    j["freq_threshold"] = freq_threshold ? json(*freq_threshold) : json(nullptr);
    j["max_len"] = max_len ? json(*max_len) : json(nullptr);
    j["max_patterns"] = max_patterns ? json(*max_patterns) : json(nullptr);
    return j;
  }
};

json stats_json(const cse::EncodingStats& s) {
  return {{"model_len", s.model_len},     {"data_len", s.data_len},     {"total", s.total},
          {"trivial_len", s.trivial_len}, {"ratio", s.ratio},           {"bit_total", s.bit_total},
          {"bit_trivial", s.bit_trivial}, {"bit_ratio", s.bit_ratio}};
}

json patterns_json(const cse::SelectedModel& m) {
  json list = json::array();
  for (std::size_t i = 0; i < m.episodes.size(); ++i) {
    const auto& e = m.episodes[i];
    json p{{"episode", cse::format_episode(e.episode, *m.alphabet)},
           {"size", e.episode.size()},
           {"frequency", e.frequency()},
           {"score", cse::score(e.episode.size(), e.frequency())}};
    if (i < m.admission_scores.size()) p["overlap_score"] = m.admission_scores[i];
    list.push_back(std::move(p));
  }
  return list;
}

// Flat key=value text, nested objects joined with '.'.
void print_text(std::ostream& out, const json& j, const std::string& prefix = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      print_text(out, *it, key);
    } else if (it->is_array()) {
      for (std::size_t i = 0; i < it->size(); ++i) {
        const auto& v = (*it)[i];
        if (v.is_object()) {
          out << key << "[" << i << "]";
          for (auto f = v.begin(); f != v.end(); ++f)
            out << ' ' << f.key() << '=' << (f->is_string() ? f->get<std::string>() : f->dump());
          out << '\n';
        } else {
          out << key << "[" << i << "]=" << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        }
      }
    } else {
      out << key << '=' << (it->is_string() ? it->get<std::string>() : it->dump()) << '\n';
    }
  }
}

void emit(const json& report, bool as_json) {
  if (as_json)
    std::cout << report.dump(2) << '\n';
  else
    print_text(std::cout, report);
}

void write_text_file(const std::string& path, const std::string& text) {
  cse::write_file_bytes(path, text);
}

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

cse::SelectedModel model_for(const cse::EventSequence& seq, const std::optional<std::string>& model_path,
                             const SelectionFlags& flags) {
  if (model_path) {
    const auto entries = cse::read_model(*model_path);
    const auto dict = cse::resolve_model(entries, seq.alphabet());
    return cse::cover_with(seq, dict);
  }
  return cse::select(seq, flags.config());
}

cse::StartCoding coding_of(bool raw) { return raw ? cse::StartCoding::kRaw : cse::StartCoding::kDelta; }

std::string encode_bytes(const cse::CodeTable& table, bool bitwise, cse::StartCoding coding) {
  return bitwise ? cse::serialize_bits(table, coding) : cse::serialize_unit(table);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compress event sequences with serial episodes"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cse 1.0.0");

  // select
  std::string input;
  SelectionFlags sel;
  std::optional<std::string> out_model, report_path;
  bool as_json = false;
  auto* c_select = app.add_subcommand("select", "select a pattern set and report its encoding");
  c_select->add_option("input", input, "sequence file")->required();
  sel.attach(c_select);
  c_select->add_option("--out-model", out_model, "write the selected episodes here");
  c_select->add_option("--report", report_path, "write a JSON report here");
  c_select->add_flag("--json", as_json, "print the report as JSON");

  // mine
  auto* c_mine = app.add_subcommand("mine", "list candidate episodes with frequency and score");
  c_mine->add_option("input", input, "sequence file")->required();
  sel.attach(c_mine);
  c_mine->add_flag("--json", as_json, "print JSON");

  // encode
  std::string out_path;
  std::optional<std::string> model_path;
  bool bitwise = false, raw_starts = false;
  auto* c_encode = app.add_subcommand("encode", "encode a sequence");
  c_encode->add_option("input", input, "sequence file")->required();
  c_encode->add_option("--out", out_path, "encoded file")->required();
  c_encode->add_option("--model", model_path, "use this model instead of selecting one");
  sel.attach(c_encode);
  c_encode->add_flag("--bitwise", bitwise, "write the Elias-coded bit format");
  c_encode->add_flag("--raw-starts", raw_starts, "bit format: write start times without delta coding");
  c_encode->add_option("--report", report_path, "write a JSON report here");
  c_encode->add_flag("--json", as_json, "print the report as JSON");

  // decode
  auto* c_decode = app.add_subcommand("decode", "decode an encoded file back to a sequence");
  c_decode->add_option("input", input, "encoded file")->required();
  c_decode->add_option("--out", out_path, "sequence file (default: stdout)");

  // verify
  auto* c_verify = app.add_subcommand("verify", "encode, decode and compare");
  c_verify->add_option("input", input, "sequence file")->required();
  c_verify->add_option("--model", model_path, "use this model instead of selecting one");
  sel.attach(c_verify);
  c_verify->add_flag("--bitwise", bitwise, "use the bit format");
  c_verify->add_flag("--raw-starts", raw_starts, "bit format: raw start times");

  // report
  auto* c_report = app.add_subcommand("report", "describe an encoded file");
  c_report->add_option("input", input, "encoded file")->required();
  c_report->add_flag("--json", as_json, "print JSON");

  // simulate
  std::string topology = "2I-2O", rate_mode = "per-path";
  cse::Time horizon = 709;
  std::uint64_t seed = 1;
  std::optional<std::string> truth_path;
  std::optional<double> rate;
  std::optional<cse::Time> scale;
  auto* c_sim = app.add_subcommand("simulate", "generate a conveyor trace");
  c_sim->add_option("--topology", topology, "built-in name or topology file");
  c_sim->add_option("--horizon", horizon, "arrival window length in time units")->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", seed, "random seed");
  c_sim->add_option("--rate", rate, "override the topology's arrival rate")->check(CLI::NonNegativeNumber);
  c_sim->add_option("--scale", scale, "override ticks per time unit")->check(CLI::PositiveNumber);
  c_sim->add_option("--rate-mode", rate_mode, "per-path: each input gets the rate; split: inputs share it")
      ->check(CLI::IsMember({"per-path", "split"}));
  c_sim->add_option("--out", out_path, "trace file (default: stdout)");
  c_sim->add_option("--truth", truth_path, "write package paths and entry times here");

  // evaluate
  auto* c_eval = app.add_subcommand("evaluate", "score a model against a conveyor topology");
  c_eval->add_option("--model", model_path, "model file")->required();
  c_eval->add_option("--topology", topology, "built-in name or topology file");
  c_eval->add_option("--input", input, "trace the model was selected on")->required();
  c_eval->add_flag("--json", as_json, "print JSON");

  // features
  bool drop_gaps = false;
  std::string delimiter = ",";
  auto* c_feat = app.add_subcommand("features", "per-sequence pattern counts for a corpus");
  c_feat->add_option("input", input, "corpus file")->required();
  c_feat->add_option("--model", model_path, "model file (default: select on the whole corpus)");
  sel.attach(c_feat);
  c_feat->add_flag("--drop-gaps", drop_gaps, "merge episodes that differ only in gaps");
  c_feat->add_option("--delimiter", delimiter, "cell separator");
  c_feat->add_option("--out", out_path, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const auto t0 = Clock::now();

    if (c_select->parsed() || c_encode->parsed()) {
      const auto seq = cse::read_sequence(input);
      const auto model = c_encode->parsed() ? model_for(seq, model_path, sel)
                                            : cse::select(seq, sel.config());
      const auto coding = coding_of(raw_starts);
      const auto table = cse::build_table(model);
      const auto stats = cse::encoding_stats(table, seq, coding);
      if (out_model) {
        std::ostringstream m;
        cse::write_model(m, model);
        write_text_file(*out_model, m.str());
      }
      if (c_encode->parsed()) cse::write_file_bytes(out_path, encode_bytes(table, bitwise, coding));
      json report{{"command", c_select->parsed() ? "select" : "encode"},
                  {"input", input},
                  {"events", seq.size()},
                  {"alphabet", seq.alphabet().size()}};
      if (model_path)
        report["config"] = json{{"model", *model_path}};
      else
        report["config"] = sel.echo();
      if (c_encode->parsed()) report["format"] = bitwise ? (raw_starts ? "bit-raw" : "bit") : "unit";
      report["patterns"] = patterns_json(model);
      report["n_patterns"] = model.episodes.size();
      report["stats"] = stats_json(stats);
      report["runtime_ms"] = ms_since(t0);
      if (report_path) write_text_file(*report_path, report.dump(2) + "\n");
      emit(report, as_json);
      return 0;
    }

    if (c_mine->parsed()) {
      const auto seq = cse::read_sequence(input);
      const auto cfg = sel.config();
      const auto cands = cfg.algorithm == cse::Algorithm::kCsc1 ? cse::mine_episodes(seq, cfg.miner)
                                                                : cse::best_extensions(seq, cfg.miner);
      json list = json::array();
      for (const auto& c : cands)
        list.push_back({{"episode", cse::format_episode(c.episode, seq.alphabet())},
                        {"frequency", c.frequency()},
                        {"score", cse::score(c.episode.size(), c.frequency())}});
      if (as_json) {
        std::cout << json{{"candidates", list}}.dump(2) << '\n';
      } else {
        for (const auto& c : list)
          std::cout << c["frequency"] << '\t' << c["score"] << '\t' << c["episode"].get<std::string>() << '\n';
      }
      return 0;
    }

    if (c_decode->parsed()) {
      const auto file = cse::parse_encoded(cse::read_file_bytes(input));
      const auto seq = cse::decode(file.table);
      if (out_path.empty()) {
        cse::write_sequence(std::cout, seq);
      } else {
        cse::write_sequence(out_path, seq);
      }
      return 0;
    }

    if (c_verify->parsed()) {
      const auto seq = cse::read_sequence(input);
      const auto model = model_for(seq, model_path, sel);
      const auto coding = coding_of(raw_starts);
      const auto table = cse::build_table(model);
      const auto file = cse::parse_encoded(encode_bytes(table, bitwise, coding));
      const auto back = cse::decode(file.table);
      if (!(back == seq)) {
        std::cerr << "verify: decoded sequence differs from input (" << back.size() << " vs " << seq.size()
                  << " events)\n";
        return kExitValidation;
      }
      std::cout << "ok events=" << seq.size() << " patterns=" << model.episodes.size()
                << " total=" << cse::unit_length(table).total << '\n';
      return 0;
    }

    if (c_report->parsed()) {
      const auto file = cse::parse_encoded(cse::read_file_bytes(input));
      const auto seq = cse::decode(file.table);
      const auto stats = cse::encoding_stats(file.table, seq, file.coding);
      json rows = json::array();
      for (const auto& r : file.table.rows)
        rows.push_back({{"episode", cse::format_episode(r.episode, *file.table.alphabet)},
                        {"size", r.size},
                        {"occurrences", r.occ_count}});
      json report{{"input", input},
                  {"format", file.format == cse::EncodedFormat::kBit ? "bit" : "unit"},
                  {"events", seq.size()},
                  {"alphabet", file.table.alphabet_size()},
                  {"rows", rows},
                  {"n_patterns", std::count_if(file.table.rows.begin(), file.table.rows.end(),
                                               [](const auto& r) { return r.size > 1; })},
                  {"stats", stats_json(stats)},
                  {"runtime_ms", ms_since(t0)}};
      if (file.format == cse::EncodedFormat::kBit) report["payload_bits"] = file.payload_bits;
      emit(report, as_json);
      return 0;
    }

    if (c_sim->parsed()) {
      auto topo = cse::load_topology(topology);
      if (rate) topo.arrival_rate = *rate;
      if (scale) topo.ticks_per_unit = *scale;
      const auto trace = cse::simulate(topo, horizon, seed,
                                       rate_mode == "split" ? cse::RateMode::kTotalSplit : cse::RateMode::kPerPath);
      if (out_path.empty())
        cse::write_sequence(std::cout, trace.sequence);
      else
        cse::write_sequence(out_path, trace.sequence);
      if (truth_path) {
        std::ostringstream t;
        cse::write_ground_truth(t, trace);
        write_text_file(*truth_path, t.str());
      }
      if (!out_path.empty())
        std::cerr << "simulate: " << trace.packages.size() << " packages (" << trace.delayed << " delayed), "
                  << trace.sequence.size() << " events\n";
      return 0;
    }

    if (c_eval->parsed()) {
      const auto topo = cse::load_topology(topology);
      const auto seq = cse::read_sequence(input);
      const auto dict = cse::resolve_model(cse::read_model(*model_path), seq.alphabet());
      const auto model = cse::cover_with(seq, dict);
      std::size_t multi = 0, matched = 0, longest = 0;
      for (const auto& e : model.episodes) {
        if (e.episode.size() < 2) continue;
        ++multi;
        if (cse::subpath_match(e.episode, seq.alphabet(), topo)) {
          ++matched;
          longest = std::max(longest, e.episode.size());
        }
      }
      const auto stats = cse::encoding_stats(cse::build_table(model), seq);
      json report{{"topology", topo.name},
                  {"n_patterns", multi},
                  {"subpath_matches", matched},
                  {"subpath_fraction", multi ? static_cast<double>(matched) / static_cast<double>(multi) : 0.0},
                  {"longest_subpath", longest},
                  {"stats", stats_json(stats)},
                  {"runtime_ms", ms_since(t0)}};
      emit(report, as_json);
      return 0;
    }

    if (c_feat->parsed()) {
      if (delimiter.size() != 1) throw cse::InvalidArgument("--delimiter must be a single character");
      const auto corpus = cse::read_corpus(input);
      cse::SelectedModel model;
      if (model_path) {
        model.alphabet = corpus.alphabet;
        for (const auto& d : cse::resolve_model(cse::read_model(*model_path), *corpus.alphabet))
          model.episodes.push_back({d.episode, {}});
      } else {
        const auto cfg = sel.config();
        model = cse::select(cse::concatenate(corpus, cfg.miner.max_gap).sequence, cfg);
      }
      const auto m = cse::export_features(corpus, model, drop_gaps);
      if (out_path.empty()) {
        cse::write_features(std::cout, m, delimiter[0]);
      } else {
        std::ostringstream s;
        cse::write_features(s, m, delimiter[0]);
        write_text_file(out_path, s.str());
      }
      return 0;
    }
  } catch (const cse::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const cse::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
