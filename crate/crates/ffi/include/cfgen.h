#ifndef CFGEN_H
#define CFGEN_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CfgenStatus {
  CFGEN_STATUS_OK = 0,
  // A required pointer argument was null.
  CFGEN_STATUS_NULL_ARGUMENT = 1,
  // A string argument was not valid UTF-8.
  CFGEN_STATUS_INVALID_UTF8 = 2,
  // Malformed or inconsistent input data.
  CFGEN_STATUS_INVALID_INPUT = 3,
  // The sentence was not eligible for a counterfactual; the reason is in
  // the last error.
  CFGEN_STATUS_SKIPPED = 4,
  // A broken internal invariant or a caught panic.
  CFGEN_STATUS_INTERNAL = 5,
} CfgenStatus;

// Counterfactual generator: model, lexicons and rules.
typedef struct CfgenGenerator CfgenGenerator;

// Trained agreement model.
typedef struct CfgenModel CfgenModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next cfgen call on the thread.
const char *cfgen_last_error(void);

// Library version, statically allocated.
const char *cfgen_version(void);

// # Safety
// `s` is null or a string returned by this library, not yet freed.
void cfgen_string_free(char *s);

// Trains agreement potentials from a CoNLL-U treebank.
//
// # Safety
// String arguments are NUL-terminated; `out` points to writable storage.
enum CfgenStatus cfgen_model_train(const char *treebank_conllu,
                                   const char *lang,
                                   double smoothing,
                                   struct CfgenModel **out);

// Loads a model from its text form.
//
// # Safety
// As for [`cfgen_model_train`].
enum CfgenStatus cfgen_model_parse(const char *text, struct CfgenModel **out);

// Text form of a model, as written by the `train-mrf` command.
//
// # Safety
// `model` is a live handle; `out` points to writable storage.
enum CfgenStatus cfgen_model_to_text(const struct CfgenModel *model, char **out);

// # Safety
// `model` is null or a handle not yet freed.
void cfgen_model_free(struct CfgenModel *model);

// Builds a generator. The model is copied, so the model handle may be
// freed afterwards. `inflections_tsv` adds rows to the builtin lexicon
// and may be null. `beta` is the bonus for keeping a token's tag.
//
// # Safety
// String arguments are null where allowed or NUL-terminated; `model` is a
// live handle; `out` points to writable storage.
enum CfgenStatus cfgen_generator_new(const struct CfgenModel *model,
                                     const char *animacy_tsv,
                                     const char *inflections_tsv,
                                     double beta,
                                     struct CfgenGenerator **out);

// # Safety
// `generator` is null or a handle not yet freed.
void cfgen_generator_free(struct CfgenGenerator *generator);

// Flips the gender of the profession `en_lemma` in a one-sentence target
// CoNLL-U block and repairs agreement. On success `out_conllu` receives
// the rewritten sentence and `out_text`, if not null, its surface string.
// [`CfgenStatus::Skipped`] means the sentence is not eligible.
//
// # Safety
// `generator` is a live handle; strings are NUL-terminated; `out_conllu`
// points to writable storage and `out_text` is null or does.
enum CfgenStatus cfgen_generator_generate_target(const struct CfgenGenerator *generator,
                                                 const char *target_conllu,
                                                 const char *en_lemma,
                                                 char **out_conllu,
                                                 char **out_text);

// Swaps the gendered pronoun of every English sentence that has exactly
// one; other sentences are returned unchanged. `out_swapped`, if not
// null, receives how many were swapped.
//
// # Safety
// `conllu` is NUL-terminated; `out` points to writable storage and
// `out_swapped` is null or does.
enum CfgenStatus cfgen_swap_english(const char *conllu, char **out, size_t *out_swapped);

// Scores translations of a challenge set and returns the metrics JSON
// written by the `evaluate` command. The challenge TSV must carry its
// stereotype column; translations are one per line.
//
// # Safety
// Strings are NUL-terminated; `out_json` points to writable storage.
enum CfgenStatus cfgen_evaluate(const char *challenge_tsv,
                                const char *translations,
                                const char *animacy_tsv,
                                const char *lang,
                                char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CFGEN_H */
