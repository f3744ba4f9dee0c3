/* tslint:disable */
/* eslint-disable */

/**
 * Small-zone `H^s0` norm of Gaussian or moment-free data on a coarse grid.
 *
 * Returns `[fitted slope, predicted slope, t0, n0, t1, n1, ...]`; the fit uses the last two decades.
 */
export function decay_curve(sigma: number, alpha: number, damped: boolean, s0: number, moment_free: boolean, t_max: number): Float64Array;

/**
 * Rows of `[r, re l1, re l2, re l3, im l1, im l2, im l3]`, flattened, over at least `n` log-spaced `r`.
 */
export function eigen_curves(sigma: number, alpha: number, damped: boolean, r_min: number, r_max: number, n: number): Float64Array;

/**
 * Rows of `[r, key(r), -max Re l(r) / key(r)]`, flattened.
 */
export function key_ratio(sigma: number, alpha: number, damped: boolean, r_min: number, r_max: number, n: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly decay_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly eigen_curves: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly key_ratio: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
