/* tslint:disable */
/* eslint-disable */

/**
 * A generated network with its background station schedule.
 */
export class World {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Composes a delivery from `src` to every node in `dsts`, each package
     * weighing `kg`. `algo` is `heuristic` or `exhaustive`.
     *
     * On success returns the route, events, totals, the final `sector` and
     * the `subgraph` node ids that were searched; otherwise `{ok: false,
     * infeasible, error}`.
     */
    compose(src: number, dsts: Uint32Array, kg: number, algo: string, angle_margin: number, radius_margin: number): string;
    /**
     * Nodes (`id`, `x`, `y`, `pads`, busy fraction) and segments.
     */
    networkJson(): string;
    /**
     * Random network of `nodes` rooftops on a `width` x `height` km area
     * with pads busy for `load` of each day. Uses the default drone.
     */
    constructor(nodes: number, width: number, height: number, max_segment_km: number, load: number, seed: number);
}

/**
 * `[[payload_kg, range_km], ...]` for the default drone, `samples` points
 * from empty to full load.
 */
export function rangeCurve(samples: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_world_free: (a: number, b: number) => void;
    readonly rangeCurve: (a: number) => [number, number];
    readonly world_compose: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number];
    readonly world_networkJson: (a: number) => [number, number];
    readonly world_new: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
