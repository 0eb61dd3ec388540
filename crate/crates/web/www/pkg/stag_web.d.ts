/* tslint:disable */
/* eslint-disable */

/**
 * Rewrites a derived pair one link at a time.
 */
export class RewriteExplorer {
    free(): void;
    [Symbol.dispose](): void;
    apply(index: number): void;
    /**
     * Applicable steps as `[{link, pair}]`; `apply` takes an index into it.
     */
    moves(): string;
    constructor(grammar: string);
    /**
     * Discards the history and begins with `pair`.
     */
    start(pair: string): void;
    /**
     * Names of the pairs a rewrite can begin with, as a JSON array.
     */
    starts(): string;
    /**
     * The current pair as `{left, right, complete, steps, svg}`.
     */
    state(): string;
    /**
     * Steps back once; the starting pair itself is never removed.
     */
    undo(): boolean;
}

/**
 * Natural and rewriting languages side by side. Natural counts derivation
 * nodes, rewriting counts steps, so `bound` nodes is `bound - 1` steps.
 */
export function compare(grammar: string, bound: number): string;

/**
 * Grammar text of a bundled fixture, or an empty string.
 */
export function fixture(name: string): string;

/**
 * Every reading of `input` with its derivations and derived trees.
 */
export function transduce(grammar: string, input: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_rewriteexplorer_free: (a: number, b: number) => void;
    readonly compare: (a: number, b: number, c: number) => [number, number];
    readonly fixture: (a: number, b: number) => [number, number];
    readonly rewriteexplorer_apply: (a: number, b: number) => [number, number];
    readonly rewriteexplorer_moves: (a: number) => [number, number];
    readonly rewriteexplorer_new: (a: number, b: number) => [number, number, number];
    readonly rewriteexplorer_start: (a: number, b: number, c: number) => [number, number];
    readonly rewriteexplorer_starts: (a: number) => [number, number];
    readonly rewriteexplorer_state: (a: number) => [number, number];
    readonly rewriteexplorer_undo: (a: number) => number;
    readonly transduce: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
