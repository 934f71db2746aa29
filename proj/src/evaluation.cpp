#include "mms/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <stdexcept>

#include "mms/error.hpp"

namespace mms {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool is_token_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

std::map<std::string, int> ngram_counts(const std::vector<std::string>& tokens, int n) {
    std::map<std::string, int> counts;
    for (size_t i = 0; i + n <= tokens.size(); i++) {
        std::string gram = tokens[i];
        for (int j = 1; j < n; j++) gram += " " + tokens[i + j];
        counts[gram]++;
    }
    return counts;
}

double f1_of(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

int lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    const size_t n = a.size(), m = b.size();
    std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
    for (size_t i = 1; i <= n; i++) {
        for (size_t j = 1; j <= m; j++) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Per-reference maxima of recall, precision, and F1, each independent.
template <typename ScoreFn>
RougeScore best_over_references(const std::vector<std::string>& references, ScoreFn&& fn) {
    RougeScore best;
    bool any = false;
    for (const auto& ref : references) {
        if (tokenize(ref).empty()) continue; // token-free references are skipped
        const RougeScore s = fn(ref);
        best.recall = std::max(best.recall, s.recall);
        best.precision = std::max(best.precision, s.precision);
        best.f1 = std::max(best.f1, s.f1);
        any = true;
    }
    if (!any) throw data_error("no usable (non-empty) reference texts");
    return best;
}

} // namespace

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (is_token_char(c)) {
            current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

RougeScore rouge_n(const std::string& candidate, const std::string& reference, int n) {
    if (n < 1) throw std::invalid_argument("rouge_n: n must be >= 1");
    const auto cand = tokenize(candidate);
    if (cand.empty()) return {};
    const auto ref = tokenize(reference);
    if (ref.empty()) return {};

    const auto cand_grams = ngram_counts(cand, n);
    const auto ref_grams = ngram_counts(ref, n);
    int cand_total = 0, ref_total = 0, overlap = 0;
    for (const auto& [gram, count] : cand_grams) {
        cand_total += count;
        auto it = ref_grams.find(gram);
        if (it != ref_grams.end()) overlap += std::min(count, it->second);
    }
    for (const auto& [gram, count] : ref_grams) ref_total += count;

    // Two texts each too short to form a single n-gram match vacuously.
    if (cand_total == 0 && ref_total == 0) return {1.0, 1.0, 1.0};
    RougeScore s;
    s.recall = ref_total > 0 ? static_cast<double>(overlap) / ref_total : 0.0;
    s.precision = cand_total > 0 ? static_cast<double>(overlap) / cand_total : 0.0;
    s.f1 = f1_of(s.precision, s.recall);
    return s;
}

RougeScore rouge_l(const std::string& candidate, const std::string& reference) {
    const auto cand = tokenize(candidate);
    if (cand.empty()) return {};
    const auto ref = tokenize(reference);
    if (ref.empty()) return {};

    const int lcs = lcs_length(cand, ref);
    RougeScore s;
    s.recall = static_cast<double>(lcs) / ref.size();
    s.precision = static_cast<double>(lcs) / cand.size();
    s.f1 = f1_of(s.precision, s.recall);
    return s;
}

RougeScore rouge_n_multi(const std::string& candidate,
                         const std::vector<std::string>& references, int n) {
    return best_over_references(references,
                                [&](const std::string& ref) { return rouge_n(candidate, ref, n); });
}

RougeScore rouge_l_multi(const std::string& candidate,
                         const std::vector<std::string>& references) {
    return best_over_references(references,
                                [&](const std::string& ref) { return rouge_l(candidate, ref); });
}

ImagePR image_pr(const std::vector<int>& selected, const std::vector<int>& gold) {
    const std::set<int> sel(selected.begin(), selected.end());
    const std::set<int> gld(gold.begin(), gold.end());
    if (gld.empty()) throw data_error("image precision/recall needs a non-empty gold set");
    int intersection = 0;
    for (int id : sel) intersection += gld.count(id) ? 1 : 0;

    ImagePR pr;
    if (!sel.empty()) pr.precision = static_cast<double>(intersection) / sel.size();
    pr.recall = static_cast<double>(intersection) / gld.size();
    return pr;
}

std::string bundle_candidate_text(const SummaryBundle& bundle) {
    std::string text;
    for (size_t i = 0; i < bundle.sentences.size(); i++) {
        if (i > 0) text += " ";
        text += bundle.sentences[i];
    }
    return text;
}

BundleReport evaluate_bundle(const SummaryBundle& bundle, const Topic& topic) {
    if (!topic.gold) throw data_error("topic '" + topic.name + "' carries no gold summary");
    const GoldSummary& gold = *topic.gold;

    BundleReport report;
    report.member_index = bundle.member_index;
    const std::string candidate = bundle_candidate_text(bundle);
    report.rouge1 = rouge_n_multi(candidate, gold.reference_texts, 1);
    report.rouge2 = rouge_n_multi(candidate, gold.reference_texts, 2);
    report.rougel = rouge_l_multi(candidate, gold.reference_texts);

    if (!gold.gold_image_ids.empty()) {
        report.images = image_pr(
            bundle.image_ids,
            std::vector<int>(gold.gold_image_ids.begin(), gold.gold_image_ids.end()));
        report.images_scored = true;
    }
    if (!gold.gold_video_ids.empty()) {
        report.video_correct = gold.gold_video_ids.count(bundle.video_id) > 0;
        report.video_scored = true;
    }
    return report;
}

TopicReport evaluate_bundles(const std::vector<SummaryBundle>& bundles, const Topic& topic) {
    TopicReport report;
    report.topic_name = topic.name;
    for (const auto& bundle : bundles) {
        report.bundles.push_back(evaluate_bundle(bundle, topic));
    }
    auto fold_rouge = [](RougeScore& best, const RougeScore& s) {
        best.recall = std::max(best.recall, s.recall);
        best.precision = std::max(best.precision, s.precision);
        best.f1 = std::max(best.f1, s.f1);
    };
    for (const auto& b : report.bundles) {
        fold_rouge(report.best_rouge1, b.rouge1);
        fold_rouge(report.best_rouge2, b.rouge2);
        fold_rouge(report.best_rougel, b.rougel);
        if (b.images_scored) {
            report.images_scored = true;
            report.best_images.recall = std::max(report.best_images.recall, b.images.recall);
            if (b.images.precision) {
                report.best_images.precision =
                    std::max(report.best_images.precision.value_or(0.0), *b.images.precision);
            }
        }
        if (b.video_scored) {
            report.video_scored = true;
            report.any_video_correct = report.any_video_correct || b.video_correct;
        }
    }
    return report;
}

BundleReport evaluate_text(const std::string& candidate, const Topic& topic) {
    if (!topic.gold) throw data_error("topic '" + topic.name + "' carries no gold summary");
    BundleReport report;
    report.member_index = -1;
    report.rouge1 = rouge_n_multi(candidate, topic.gold->reference_texts, 1);
    report.rouge2 = rouge_n_multi(candidate, topic.gold->reference_texts, 2);
    report.rougel = rouge_l_multi(candidate, topic.gold->reference_texts);
    return report;
}

namespace {

nlohmann::ordered_json rouge_json(const RougeScore& s) {
    return {{"recall", s.recall}, {"precision", s.precision}, {"f1", s.f1}};
}

} // namespace

nlohmann::ordered_json report_json(const TopicReport& report) {
    nlohmann::ordered_json j;
    j["topic"] = report.topic_name;
    j["bundles"] = nlohmann::ordered_json::array();
    for (const auto& b : report.bundles) {
        nlohmann::ordered_json jb;
        jb["member_index"] = b.member_index;
        jb["rouge1"] = rouge_json(b.rouge1);
        jb["rouge2"] = rouge_json(b.rouge2);
        jb["rougeL"] = rouge_json(b.rougel);
        if (b.images_scored) {
            if (b.images.precision) {
                jb["image_precision"] = *b.images.precision;
            } else {
                jb["image_precision"] = nullptr; // empty selection: undefined
            }
            jb["image_recall"] = b.images.recall;
        } else {
            jb["image_precision"] = nullptr;
            jb["image_recall"] = nullptr;
        }
        if (b.video_scored) {
            jb["video_correct"] = b.video_correct;
        } else {
            jb["video_correct"] = nullptr;
        }
        j["bundles"].push_back(std::move(jb));
    }
    nlohmann::ordered_json agg;
    agg["rouge1"] = rouge_json(report.best_rouge1);
    agg["rouge2"] = rouge_json(report.best_rouge2);
    agg["rougeL"] = rouge_json(report.best_rougel);
    if (report.images_scored) {
        if (report.best_images.precision) {
            agg["image_precision"] = *report.best_images.precision;
        } else {
            agg["image_precision"] = nullptr;
        }
        agg["image_recall"] = report.best_images.recall;
    } else {
        agg["image_precision"] = nullptr;
        agg["image_recall"] = nullptr;
    }
    if (report.video_scored) {
        agg["any_video_correct"] = report.any_video_correct;
    } else {
        agg["any_video_correct"] = nullptr;
    }
    j["aggregate"] = std::move(agg);
    return j;
}

std::string report_csv(const TopicReport& report) {
    std::string csv = "topic,member,metric,value\n";
    auto row = [&](int member, const std::string& metric, double value) {
        csv += report.topic_name + "," + std::to_string(member) + "," + metric + "," +
               fmt_double(value) + "\n";
    };
    for (const auto& b : report.bundles) {
        row(b.member_index, "rouge1_recall", b.rouge1.recall);
        row(b.member_index, "rouge1_precision", b.rouge1.precision);
        row(b.member_index, "rouge1_f1", b.rouge1.f1);
        row(b.member_index, "rouge2_recall", b.rouge2.recall);
        row(b.member_index, "rouge2_precision", b.rouge2.precision);
        row(b.member_index, "rouge2_f1", b.rouge2.f1);
        row(b.member_index, "rougeL_recall", b.rougel.recall);
        row(b.member_index, "rougeL_precision", b.rougel.precision);
        row(b.member_index, "rougeL_f1", b.rougel.f1);
        if (b.images_scored) {
            if (b.images.precision) row(b.member_index, "image_precision", *b.images.precision);
            row(b.member_index, "image_recall", b.images.recall);
        }
        if (b.video_scored) {
            row(b.member_index, "video_correct", b.video_correct ? 1.0 : 0.0);
        }
    }
    return csv;
}

} // namespace mms
