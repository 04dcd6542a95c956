/*
 * vlcm -- generator and verification toolkit for multiplierless
 * very-large-constant multiplication and word-serial Montgomery
 * multiplication hardware.
 *
 * C interface of the shared library. All functionality is driven by a JSON
 * configuration document (the same schema the vlcmgen command-line tool
 * uses); results come back as an opaque handle carrying a status code, a
 * human-readable message, and a JSON report.
 */

#ifndef VLCM_VLCM_H
#define VLCM_VLCM_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vlcm_status {
    VLCM_OK = 0,
    VLCM_ERR_CONFIG = 1, /* bad configuration or input data */
    VLCM_ERR_VERIFY = 2, /* a correctness check failed */
    VLCM_ERR_OTHER = 3
} vlcm_status;

typedef struct vlcm_result vlcm_result; /* opaque */

/*
 * Commands. The configuration JSON accepts:
 *   constants       array of hex strings        constants_file  path
 *   instance        bundled curve name          arch            sa2io|sacsa|sahybrid|ct
 *   p, r, iw        partition widths / input width
 *   output          "single" | "sumcarry"       seed, vectors
 *   out_dir, name   where to place the emitted file set
 *   archs, p_list, r_list, iw_list, workers, format   (sweep)
 *   r1, r2, pairs                                     (montgomery)
 *   dir                                               (verify)
 *
 * Every call returns a fresh result handle through *out (also on failure);
 * release it with vlcm_result_free. The returned status equals
 * vlcm_result_status(*out).
 */
vlcm_status vlcm_generate(const char* config_json, vlcm_result** out);
vlcm_status vlcm_sweep(const char* config_json, vlcm_result** out);
vlcm_status vlcm_montgomery(const char* config_json, vlcm_result** out);
vlcm_status vlcm_verify(const char* config_json, vlcm_result** out);

vlcm_status vlcm_result_status(const vlcm_result* res);
/* Lifetime of both strings ends with vlcm_result_free. */
const char* vlcm_result_message(const vlcm_result* res);
const char* vlcm_result_report_json(const vlcm_result* res);
void vlcm_result_free(vlcm_result* res);

const char* vlcm_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* VLCM_VLCM_H */
