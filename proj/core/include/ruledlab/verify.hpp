#pragma once

#include <string>
#include <vector>

#include "ruledlab/image.hpp"
#include "ruledlab/scene.hpp"

namespace ruledlab::verify {

enum class Check { Oracle, Prop1, Prop2, Prop3, Prop4, Prop5, Prop6, Examples };

const char* check_name(Check c);

/// Parses a comma-separated check set. "all" selects every check including
/// the example assertions; "auto" selects the checks applicable to the
/// config (everything except 'examples', with the image-surface checks
/// gated on a usable base).
std::vector<Check> parse_checks(const std::string& text, const scene::SceneConfig& cfg);

std::vector<Check> applicable_checks(const scene::SceneConfig& cfg);

struct CheckResult {
    enum class Status { Pass, Fail, Skip };

    std::string name;
    Status status = Status::Skip;
    std::vector<std::pair<std::string, double>> stats;
    std::string note;
};

struct Report {
    std::string scene;
    std::vector<CheckResult> checks;
    // invariant ranges of the image surface, one entry per sign-stable
    // u-interval; empty unless the support has the form f(u)/w
    std::vector<image::InvariantSegment> segments;

    bool overall() const;
    std::string text() const;
};

/// Runs the requested checks against the config. Every check compares an
/// independently measured quantity against the matching closed-form claim
/// and records the residuals it saw.
Report run_verify(const scene::SceneConfig& cfg, const std::vector<Check>& checks);

/// Classification front-end: verdict plus all residual evidence as text.
laplace::ClassificationReport run_classify(const scene::SceneConfig& cfg);
std::string classification_text(const scene::SceneConfig& cfg,
                                const laplace::ClassificationReport& rep);

/// Per-grid-point CSV of the surface, normalizations and Laplace field.
std::string eval_csv(const scene::SceneConfig& cfg);

/// CSV of the image curve sampled at v = 0; includes the curvature column
/// for conoidal scenes.
std::string gamma_csv(const scene::SceneConfig& cfg);

} // namespace ruledlab::verify
