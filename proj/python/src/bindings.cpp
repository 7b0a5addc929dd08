/**
 * @file bindings.cpp
 * @brief Python module `notegrade._notegrade`. Structured results cross the
 * boundary as JSON text; the pure-Python wrapper decodes them.
 */
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "notegrade/harness.hpp"

namespace py = pybind11;
using namespace notegrade;

namespace {

std::string verdict_json(const FormatVerdict& verdict) {
  nlohmann::ordered_json j;
  j["legal"] = verdict.legal;
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : verdict.violations) {
    j["violations"].push_back(
        {{"rule_id", v.rule_id}, {"line", v.where.line}, {"column", v.where.column}, {"message", v.message}});
  }
  return j.dump();
}

ScoringOptions options_from(const std::string& config_json) {
  return config_json.empty() ? ScoringOptions{} : apply_config_json(config_json).scoring;
}

std::string score(const std::string& task_name, const std::string& format_name, const std::string& pred,
                  const std::string& gt_json, const std::string& answer, const std::string& key,
                  const std::string& meter, const std::string& config_json) {
  const Task task = parse_task(task_name);
  const NotationFormat format = parse_format(format_name);
  const auto options = options_from(config_json);
  TaskResult result;
  switch (task) {
    case Task::VSU: result = score_vsu(pred, answer); break;
    case Task::CNC: result = score_cnc(pred, format, parse_ground_truth(gt_json), options); break;
    case Task::AST: result = score_ast(pred, format, parse_ground_truth(gt_json), options); break;
    case Task::SMG:
      try {
        result = score_smg(pred, format, TimeSignature::parse(meter), KeySignature::parse(key), options);
      } catch (const DomainError& e) {
        throw ConfigError(e.what());
      }
      break;
  }
  result.task = task;
  result.format = format;
  return task_result_to_json(result);
}

std::string batch(const std::string& manifest_path, unsigned workers, const std::string& config_json,
                  const std::string& external_path) {
  HarnessConfig config = config_json.empty() ? HarnessConfig{} : apply_config_json(config_json);
  if (workers > 0) config.workers = workers;
  const auto records = load_manifest(manifest_path);
  Report report;
  {
    py::gil_scoped_release release;
    report = run_batch(records, config);
  }
  if (!external_path.empty()) attach_external_scores(report, ingest_external_scores(external_path));
  return report_to_json(report);
}

}  // namespace

PYBIND11_MODULE(_notegrade, m) {
  m.doc() = "Deterministic scoring for symbolic music notation";
  m.attr("__version__") = std::string(kToolVersion);

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<IntegrityError>(m, "IntegrityError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ConversionError>(m, "ConversionError", base.ptr());

  m.def("tab_to_midi", [](int string_number, int fret, std::optional<std::array<int, 6>> tuning) {
    return tab_to_midi({string_number, fret, 0}, tuning ? Tuning(*tuning) : Tuning()).value();
  }, py::arg("string_number"), py::arg("fret"), py::arg("tuning") = py::none());
  m.def("jianpu_to_midi", [](int degree, int octave_shift, const std::string& key) {
    return jianpu_to_midi({degree, octave_shift, 1}, KeySignature::parse(key)).value();
  }, py::arg("degree"), py::arg("octave_shift"), py::arg("key"));
  m.def("midi_to_scientific", [](int midi) { return midi_to_scientific(MidiPitch(midi)).to_string(); });
  m.def("scientific_to_midi", [](const std::string& name) { return scientific_to_midi(name).value(); });

  m.def("edit_distance", [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    return edit_distance(a, b);
  });
  m.def("alignment_accuracy", [](const std::vector<std::string>& gt, const std::vector<std::string>& pred) {
    const auto acc = alignment_accuracy(gt, pred);
    return py::make_tuple(to_fraction_string(acc.value), acc.ed);
  });

  m.def("validate", [](const std::string& text, const std::string& format) {
    return verdict_json(validate_format(text, parse_format(format)));
  });
  m.def("project", [](const std::string& text, const std::string& format) {
    if (format == "gt") return to_json(project(parse_ground_truth(text)));
    return to_json(project(parse_notation(text, parse_format(format))));
  });
  m.def("score", &score, py::arg("task"), py::arg("format"), py::arg("pred"), py::arg("gt_json") = "",
        py::arg("answer") = "", py::arg("key") = "", py::arg("meter") = "", py::arg("config_json") = "");
  m.def("batch", &batch, py::arg("manifest_path"), py::arg("workers") = 0, py::arg("config_json") = "",
        py::arg("external_scores") = "");
}
