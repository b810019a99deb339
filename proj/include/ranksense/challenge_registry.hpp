#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace ranksense::schema {

inline constexpr std::string_view kRegistryVersion = "1.0";

struct Category {
  std::string_view id;
  std::string_view name;
};

struct Parameter {
  int number;
  std::string_view id;
  std::string_view name;
  std::string_view category;
  /// Member of the reduced set gated at 90% instantiation.
  bool essential;
  std::string_view description;
};

inline constexpr std::array<Category, 7> kCategories{{
    {"challenge_organization", "Challenge organization"},
    {"participation_conditions", "Participation conditions"},
    {"validation_objective", "Validation objective"},
    {"study_conditions", "Study conditions"},
    {"validation_data_sets", "Validation data sets"},
    {"assessment_method", "Assessment method"},
    {"challenge_outcome", "Challenge outcome"},
}};

// Mirrored in data/challenge_registry.v1.json for external tooling; a unit
// test keeps the two in sync.
inline constexpr std::array<Parameter, 53> kParameters{{
    {1, "challenge_name", "Challenge name", "challenge_organization", true,
     "Full challenge title including the year."},
    {2, "challenge_website", "Challenge website", "challenge_organization", true,
     "Address of the challenge web page, if one exists."},
    {3, "organizing_institutions_and_contact_person", "Organizing institutions and contact person", "challenge_organization", true,
     "Organizing team with affiliations and a designated contact."},
    {4, "life_cycle_type", "Life cycle type", "challenge_organization", true,
     "Submission cycle: one-time event, repeated event or open call."},
    {5, "challenge_venue_or_platform", "Challenge venue or platform", "challenge_organization", false,
     "Conference, event or online platform hosting the challenge."},
    {6, "challenge_schedule", "Challenge schedule", "challenge_organization", true,
     "Key dates such as data releases, submission deadlines and result announcement."},
    {7, "ethical_approval", "Ethical approval", "challenge_organization", true,
     "Ethics approval details for the data (board, location, date, number)."},
    {8, "data_usage_agreement", "Data usage agreement", "challenge_organization", false,
     "Terms under which participants and others may use and share the data."},
    {9, "interaction_level_policy", "Interaction level policy", "participation_conditions", true,
     "Degree of user interaction allowed for participating algorithms."},
    {10, "organizer_participation_policy", "Organizer participation policy", "participation_conditions", true,
     "Rules for participation by members of the organizing institutes."},
    {11, "training_data_policy", "Training data policy", "participation_conditions", true,
     "Which data (challenge-provided, public, private, pre-trained models) may be used for training."},
    {12, "pre_evaluation_method", "Pre-evaluation method", "participation_conditions", false,
     "Whether and how algorithms can be evaluated before the final submission."},
    {13, "submission_format", "Submission format", "participation_conditions", true,
     "Form in which results are submitted (e.g. result files, containers)."},
    {14, "submission_instructions", "Submission instructions", "participation_conditions", false,
     "How and when submissions are prepared and what each must contain."},
    {15, "evaluation_software", "Evaluation software", "participation_conditions", false,
     "Availability of the organizers' evaluation code."},
    {16, "fields_of_application", "Field(s) of application", "validation_objective", true,
     "Medical or biological application targeted by the algorithms."},
    {17, "task_categories", "Task category(ies)", "validation_objective", true,
     "Algorithm category, e.g. segmentation, classification, tracking."},
    {18, "target_cohort", "Target cohort", "validation_objective", true,
     "Subjects or objects the data would come from in the final application."},
    {19, "algorithm_targets", "Algorithm target(s)", "validation_objective", true,
     "Structure, object or component the algorithms focus on."},
    {20, "data_origin", "Data origin", "validation_objective", true,
     "Body region or part of the subject the data would come from in the final application."},
    {21, "assessment_aims", "Assessment aim(s)", "validation_objective", true,
     "Algorithm properties the challenge intends to assess, such as accuracy or runtime."},
    {22, "validation_cohort", "Validation cohort", "study_conditions", true,
     "Subjects or objects actually used to acquire the validation data."},
    {23, "centers", "Center(s)", "study_conditions", true,
     "Centers or institutes where the data was acquired."},
    {24, "imaging_modalities", "Imaging modality(ies)", "study_conditions", true,
     "Imaging techniques used for the training and test data."},
    {25, "context_information", "Context information", "study_conditions", true,
     "Additional non-image information supplied with the images."},
    {26, "acquisition_devices", "Acquisition device(s)", "study_conditions", false,
     "Devices used to acquire the imaging and auxiliary validation data."},
    {27, "acquisition_protocols", "Acquisition protocol(s)", "study_conditions", false,
     "Relevant acquisition settings per device."},
    {28, "operators", "Operator(s)", "study_conditions", false,
     "Characteristics of the people operating the acquisition devices."},
    {29, "distribution_of_training_and_test_cases", "Distribution of training and test cases", "validation_data_sets", true,
     "How and why the data was split into training and test cases."},
    {30, "category_of_training_data_generation_method", "Category of training data generation method", "validation_data_sets", true,
     "How the desired outputs for training data were produced (manual, simulated, automatic, none)."},
    {31, "number_of_training_cases", "Number of training cases", "validation_data_sets", true,
     "Number of cases available for training and tuning."},
    {32, "characteristics_of_training_cases", "Characteristics of training cases", "validation_data_sets", true,
     "Nature of the training cases, e.g. level of annotation detail."},
    {33, "annotation_policy_for_training_cases", "Annotation policy for training cases", "validation_data_sets", true,
     "Instructions given to annotators of the training cases."},
    {34, "annotators_of_training_cases", "Annotator(s) of training cases", "validation_data_sets", true,
     "Who or what annotated the training data."},
    {35, "annotation_aggregation_methods_for_training_cases", "Annotation aggregation method(s) for training cases", "validation_data_sets", true,
     "How multiple training annotations of one case were merged."},
    {36, "category_of_reference_generation_method", "Category of reference generation method", "validation_data_sets", true,
     "How the reference used for assessment was produced."},
    {37, "number_of_test_cases", "Number of test cases", "validation_data_sets", true,
     "Number of cases used to assess the algorithms."},
    {38, "characteristics_of_test_cases", "Characteristics of test cases", "validation_data_sets", true,
     "Nature of the test cases, e.g. level of annotation detail."},
    {39, "annotation_policy_for_test_cases", "Annotation policy for test cases", "validation_data_sets", true,
     "Instructions given to annotators of the test cases."},
    {40, "annotators_of_test_cases", "Annotator(s) of test cases", "validation_data_sets", true,
     "Who or what annotated the test data."},
    {41, "annotation_aggregation_methods_for_test_cases", "Annotation aggregation method(s) for test cases", "validation_data_sets", true,
     "How multiple test annotations of one case were merged, if any."},
    {42, "data_preprocessing_methods", "Data pre-processing method(s)", "validation_data_sets", false,
     "Processing applied to the raw data before release to participants."},
    {43, "potential_sources_of_reference_errors", "Potential sources of reference errors", "validation_data_sets", false,
     "Main error sources of the reference, e.g. inter- and intra-observer variability."},
    {44, "metrics", "Metric(s)", "assessment_method", true,
     "Functions used to measure algorithm performance."},
    {45, "justification_of_metrics", "Justification of metrics", "assessment_method", true,
     "Why the metrics were chosen, ideally tied to the clinical application."},
    {46, "rank_computation_method", "Rank computation method", "assessment_method", true,
     "How the final ranking is computed, including aggregation over cases and metrics and tie handling."},
    {47, "interaction_level_handling", "Interaction level handling", "assessment_method", true,
     "How differing levels of user interaction are treated in the ranking."},
    {48, "missing_data_handling", "Missing data handling", "assessment_method", true,
     "How submissions with missing test-case results are treated."},
    {49, "uncertainty_handling", "Uncertainty handling", "assessment_method", true,
     "How ranking uncertainty is made explicit, e.g. by resampling."},
    {50, "statistical_tests", "Statistical test(s)", "assessment_method", true,
     "Statistical tests used to compare participants."},
    {51, "information_on_participants", "Information on participants", "challenge_outcome", false,
     "Participating teams, affiliations and method descriptions."},
    {52, "results", "Results", "challenge_outcome", false,
     "Metric values and rankings, including submission counts per participant."},
    {53, "publication", "Publication", "challenge_outcome", false,
     "Publication summarizing the challenge, preferably with a DOI."},
}};

inline constexpr std::size_t kEssentialCount = [] {
  std::size_t n = 0;
  for (const auto& p : kParameters) n += p.essential;
  return n;
}();

/// Essential-set instantiation percentage required by the gate.
inline constexpr double kEssentialGatePct = 90.0;

inline std::optional<std::size_t> parameter_index(std::string_view id) {
  for (std::size_t i = 0; i < kParameters.size(); ++i)
    if (kParameters[i].id == id) return i;
  return std::nullopt;
}

inline std::optional<std::size_t> category_index(std::string_view id) {
  for (std::size_t i = 0; i < kCategories.size(); ++i)
    if (kCategories[i].id == id) return i;
  return std::nullopt;
}

}  // namespace ranksense::schema
