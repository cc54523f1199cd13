export * from "./api/types";
export { ApiClient, ApiError, type FetchLike, type ClientOptions } from "./api/client";
export * from "./verbal";
export * from "./layout/layout";
export * from "./cpt/editor";
export * from "./views/gates";
export * from "./views/step5";
export * from "./views/hints";
