/* tslint:disable */
/* eslint-disable */

/**
 * A built-in complex as complex-file JSON.
 */
export function catalog_entry(name: string): string;

/**
 * Names of the built-in complexes.
 */
export function catalog_names(): string;

/**
 * Integral homology and Euler characteristic.
 */
export function homology_report(text: string): string;

/**
 * Combinatorial manifold verdict in dimension `dim`.
 */
export function manifold_report(text: string, dim: number): string;

/**
 * One subdivision round, returned as `{ "complex": <file>, "off": <OFF text> }`.
 * `scheme` is `"barycentric"` or `"edgewise"`; `degree` applies to the latter.
 */
export function subdivide(text: string, scheme: string, degree: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly catalog_entry: (a: number, b: number) => [number, number, number, number];
    readonly catalog_names: () => [number, number];
    readonly homology_report: (a: number, b: number) => [number, number, number, number];
    readonly manifold_report: (a: number, b: number, c: number) => [number, number, number, number];
    readonly subdivide: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
