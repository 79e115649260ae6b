/* tslint:disable */
/* eslint-disable */

export function closure(family: string, params: string, r0: number): string;

export function defaultParams(family: string): string;

/**
 * Interleaved `r, h` samples of the depth along θ = 0.
 */
export function depthProfile(family: string, params: string, t: number, n: number): Float64Array;

/**
 * Family names, comma separated.
 */
export function familyNames(): string;

/**
 * Interleaved `x, y` samples of a particle path.
 */
export function particlePath(family: string, params: string, r0: number, periods: number, n: number): Float64Array;

export function residualSummary(family: string, params: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly closure: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly defaultParams: (a: number, b: number) => [number, number, number, number];
    readonly depthProfile: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly familyNames: () => [number, number];
    readonly particlePath: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly residualSummary: (a: number, b: number, c: number, d: number) => [number, number, number, number];
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
