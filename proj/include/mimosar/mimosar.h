/* mimosar - desk-scale 3D near-field virtual MIMO-SAR imaging toolkit.
 *
 * C API over the native core: opaque handles, integer status codes, and a
 * thread-local error message. Every *_create/_load call that returns
 * MSAR_OK hands ownership of the handle to the caller; release it with the
 * matching *_free. Handles are immutable once returned; operations produce
 * new handles instead of mutating inputs.
 */

#ifndef MIMOSAR_H
#define MIMOSAR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum msar_status {
    MSAR_OK = 0,
    MSAR_ERR_RUNTIME = 1,     /* internal failure */
    MSAR_ERR_CONFIG = 2,      /* bad configuration, arguments, or state */
    MSAR_ERR_CALIBRATION = 3, /* calibration failure (weak peak, ...) */
    MSAR_ERR_ANALYSIS = 4,    /* metric/analysis failure (no peak, ...) */
    MSAR_ERR_DOMAIN = 5,      /* value outside the physical domain */
    MSAR_ERR_IO = 6           /* file missing, malformed, or hash mismatch */
} msar_status;

typedef struct msar_config msar_config;  /* parsed run configuration */
typedef struct msar_cube msar_cube;      /* beat-signal cube or range profiles */
typedef struct msar_cal msar_cal;        /* calibration profile */
typedef struct msar_volume msar_volume;  /* reconstructed image volume */

/* Message for the most recent failing call on this thread. */
const char* msar_last_error(void);

const char* msar_version(void);

/* Worker threads for the compute kernels; n <= 0 keeps hardware default. */
void msar_set_threads(int n);

/* ---- configuration ---- */

msar_status msar_config_load(const char* path, msar_config** out);
/* Override one `section.key` with the same parsing rules as the file. */
msar_status msar_config_set(msar_config* cfg, const char* key, const char* value);
void msar_config_free(msar_config* cfg);

/* ---- cubes ---- */

msar_status msar_simulate(const msar_config* cfg, msar_cube** out);
msar_status msar_cube_load(const msar_config* cfg, const char* path, msar_cube** out);
msar_status msar_cube_save(const msar_cube* cube, const char* path);
/* Stage tag: 0 raw, 1 nonlin_compensated, 2 range_compressed, 3 aligned,
 * 4 calibrated. */
int msar_cube_stage(const msar_cube* cube);
msar_status msar_cube_dims(const msar_cube* cube, uint64_t* n_fast, uint64_t* n_chan, uint64_t* n_az);
void msar_cube_free(msar_cube* cube);

/* ---- fast-time processing ---- */

msar_status msar_compensate_nonlinearity(const msar_config* cfg, const msar_cube* in, msar_cube** out);
msar_status msar_range_compress(const msar_config* cfg, const msar_cube* in, msar_cube** out);
/* shifts may be NULL; otherwise it receives n_chan per-channel corrections
 * in bins. */
msar_status msar_range_align(const msar_config* cfg, const msar_cube* in, msar_cube** out,
                             double* shifts);

/* ---- calibration ---- */

/* Full estimation chain from a calibration-scene cube. */
msar_status msar_calibrate(const msar_config* cfg, const msar_cube* cube, msar_cal** out);
msar_status msar_apply_calibration(const msar_cal* cal, const msar_cube* in, msar_cube** out);
msar_status msar_cal_load(const char* path, msar_cal** out);
msar_status msar_cal_save(const msar_cal* cal, const char* path);
void msar_cal_free(msar_cal* cal);

/* ---- image formation ---- */

/* Full imaging chain per the config (algorithm, z planes, windows). cal may
 * be NULL for uncalibrated reconstruction. */
msar_status msar_reconstruct(const msar_config* cfg, const msar_cube* cube, const msar_cal* cal,
                             msar_volume** out);
msar_status msar_volume_load(const char* path, msar_volume** out);
msar_status msar_volume_save(const msar_volume* vol, const char* path);
msar_status msar_volume_dims(const msar_volume* vol, uint64_t* nx, uint64_t* ny, uint64_t* nz);
void msar_volume_free(msar_volume* vol);

/* ---- analysis & rendering ---- */

typedef struct msar_ipr_report {
    double peak_pos_x_m;
    double peak_pos_y_m;
    double peak_magnitude;
    double width3db_x_m;
    double width3db_y_m;
    double pslr_db;
    double islr_db;
} msar_ipr_report;

/* Impulse-response metrics on one volume plane (axis cuts through the peak). */
msar_status msar_volume_ipr(const msar_volume* vol, int plane_index, msar_ipr_report* out);
/* Range-cut metrics on a range-compressed cube; widths come out in meters. */
msar_status msar_profiles_range_ipr(const msar_cube* profiles, int channel, int azimuth,
                                    msar_ipr_report* out);

msar_status msar_spectrogram_csv(const msar_cube* cube, int channel, int azimuth, int window_len,
                                 int hop, const char* path);
msar_status msar_power_spectrum_csv(const msar_cube* cube, int channel, int azimuth, const char* path);
msar_status msar_range_profile_csv(const msar_cube* profiles, int channel, int azimuth,
                                   const char* path);
msar_status msar_volume_render_pgm(const msar_volume* vol, int plane_index, double dyn_range_db,
                                   const char* path);
msar_status msar_volume_peak_cuts_csv(const msar_volume* vol, int plane_index, const char* x_path,
                                      const char* y_path);

#ifdef __cplusplus
}
#endif

#endif /* MIMOSAR_H */
