/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_rewriteexplorer_free: (a: number, b: number) => void;
export const compare: (a: number, b: number, c: number) => [number, number];
export const fixture: (a: number, b: number) => [number, number];
export const rewriteexplorer_apply: (a: number, b: number) => [number, number];
export const rewriteexplorer_moves: (a: number) => [number, number];
export const rewriteexplorer_new: (a: number, b: number) => [number, number, number];
export const rewriteexplorer_start: (a: number, b: number, c: number) => [number, number];
export const rewriteexplorer_starts: (a: number) => [number, number];
export const rewriteexplorer_state: (a: number) => [number, number];
export const rewriteexplorer_undo: (a: number) => number;
export const transduce: (a: number, b: number, c: number, d: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
