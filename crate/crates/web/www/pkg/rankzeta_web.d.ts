/* tslint:disable */
/* eslint-disable */

/**
 * Invariants and stability verdicts of the lattice spanned by `(a, b)`, `(c, d)`.
 */
export function classify_lattice(a: number, b: number, c: number, d: number): string;

/**
 * `ξ^{G/P}(1/2 + it)` on `n` equally spaced `t ∈ [t_min, t_max]`, for the
 * rank ≤ 2 groups (the others are too slow for an interactive page).
 */
export function critical_line(group: string, parabolic: string, t_min: number, t_max: number, n: number): string;

/**
 * The truncated integral `I_T(s)` in closed form on a `T` grid, plus the
 * geometric quadrature at a few of the grid points.
 */
export function truncation_curve(s_re: number, s_im: number, t_max: number, n: number, checks: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly classify_lattice: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly critical_line: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly truncation_curve: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
